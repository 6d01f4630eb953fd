#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "edgelab/contour.hpp"
#include "edgelab/harness.hpp"
#include "edgelab/kernel.hpp"
#include "edgelab/predictors.hpp"

using namespace edgelab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

Point parse_point(const std::string& text) {
    std::vector<cplx> c;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) c.push_back(parse_complex(cur));
    if (c.empty()) throw UsageError("empty point '" + text + "'");
    return Point(std::move(c));
}

std::vector<ExperimentSpec> select_specs(const std::string& target, const std::string& config, int threads) {
    std::vector<ExperimentSpec> specs = config.empty() ? default_suite() : load_config(config);
    if (target != "all") {
        const auto kind = parse_kind(target);
        std::vector<ExperimentSpec> keep;
        for (const auto& s : specs) {
            if ((kind && s.kind == *kind) || s.name == target) keep.push_back(s);
        }
        if (keep.empty()) throw UsageError("unknown experiment or kind '" + target + "'");
        specs = keep;
    }
    if (threads > 0) {
        for (auto& s : specs) s.threads = threads;
    }
    return specs;
}

std::vector<ConvergenceReport> run_all(const std::vector<ExperimentSpec>& specs, bool quiet) {
    std::vector<ConvergenceReport> out;
    for (const auto& s : specs) {
        out.push_back(run_experiment(s));
        if (!quiet) {
            const auto& r = out.back();
            std::cerr << (r.pass ? "PASS " : "FAIL ") << s.name << " (" << kind_name(s.kind) << ")\n";
            for (const auto& d : r.diagnostics) std::cerr << "    " << d << "\n";
        }
    }
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw UsageError("write failed for '" + path + "'");
}

ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw UsageError("unknown format '" + s + "'");
}

bool all_pass(const std::vector<ConvergenceReport>& reps) {
    for (const auto& r : reps) {
        if (!r.pass) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge universality verification toolkit for random normal matrices"};
    app.require_subcommand(1);

    std::string config;
    int threads = 0;
    app.add_option("--config", config, "Configuration file (INI sections per experiment)");
    app.add_option("--threads", threads, "Override the worker count of every experiment");

    auto* verify = app.add_subcommand("verify", "Run verification experiments and print PASS/FAIL per experiment");
    std::string target = "all";
    std::string verify_format, verify_out;
    verify->add_option("target", target, "'all', an experiment kind, or an experiment name")->required();
    verify->add_option("--format", verify_format, "Also write a report (csv|json)")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--out", verify_out, "Report destination");

    auto* kernel = app.add_subcommand("kernel", "Kernel evaluation");
    auto* keval = kernel->add_subcommand("eval", "Evaluate K_n(z,w) by direct sum and by contour integral");
    kernel->require_subcommand(1);
    ModelParams kp;
    std::string zs, ws;
    keval->add_option("--d", kp.d, "Dimension")->required();
    keval->add_option("--tau", kp.tau, "Non-Hermiticity parameter in [0,1)")->required();
    keval->add_option("--n", kp.n, "Matrix size")->required();
    keval->add_option("--z", zs, "Comma separated coordinates, e.g. 0.3+0.1i,-0.2i")->required();
    keval->add_option("--w", ws, "Comma separated coordinates")->required();

    auto* density = app.add_subcommand("density", "Edge density tools");
    auto* dscan = density->add_subcommand("scan", "Scaled density n^d rho_1 along the outward normal");
    density->require_subcommand(1);
    ModelParams dp{1, 0.0, 256};
    double lmin = -2.0, lmax = 2.0;
    int steps = 21;
    std::uint64_t dseed = 1;
    dscan->add_option("--d", dp.d, "Dimension");
    dscan->add_option("--tau", dp.tau, "Non-Hermiticity parameter");
    dscan->add_option("--n", dp.n, "Matrix size");
    dscan->add_option("--lambda-min", lmin, "First lambda");
    dscan->add_option("--lambda-max", lmax, "Last lambda");
    dscan->add_option("--steps", steps, "Number of lambda values")->check(CLI::PositiveNumber);
    dscan->add_option("--seed", dseed, "Seed selecting the edge point");

    auto* report = app.add_subcommand("report", "Run experiments and write a machine readable report");
    std::string rformat = "csv", rout, rtarget = "all";
    report->add_option("--format", rformat, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    report->add_option("--out", rout, "Destination (default stdout)");
    report->add_option("--target", rtarget, "'all', a kind, or an experiment name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (*verify) {
            const auto reps = run_all(select_specs(target, config, threads), false);
            if (!verify_format.empty()) write_output(emit_report(reps, parse_format(verify_format)), verify_out);
            const bool ok = all_pass(reps);
            std::cerr << (ok ? "all experiments passed" : "some experiments failed") << "\n";
            return ok ? kExitPass : kExitFail;
        }
        if (*keval) {
            const Point z = parse_point(zs), w = parse_point(ws);
            const cplx a = kernel_exact(kp, z, w);
            const cplx b = kernel_contour(kp, z, w);
            std::cout.precision(17);
            std::cout << "direct  " << format_complex(a) << "\n";
            std::cout << "contour " << format_complex(b) << "\n";
            std::cout << "relative_difference " << std::abs(a - b) / std::abs(a) << "\n";
            return kExitPass;
        }
        if (*dscan) {
            const EdgePoint e = edge_point_sample(dp, dseed);
            std::cout.precision(12);
            std::cout << "lambda,scaled_density,leading,prediction\n";
            for (int i = 0; i < steps; ++i) {
                const double lam = steps == 1 ? lmin : lmin + (lmax - lmin) * i / (steps - 1);
                std::cout << lam << "," << scaled_edge_density(dp, e, lam) << "," << edge_density_leading(dp.d, lam) << ","
                          << edge_density_prediction(dp, e, lam, dp.n) << "\n";
            }
            return kExitPass;
        }
        if (*report) {
            const auto reps = run_all(select_specs(rtarget, config, threads), true);
            write_output(emit_report(reps, parse_format(rformat)), rout);
            return all_pass(reps) ? kExitPass : kExitFail;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
