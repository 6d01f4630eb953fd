#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edgelab/contour.hpp"
#include "edgelab/harness.hpp"
#include "edgelab/kernel.hpp"
#include "edgelab/predictors.hpp"

namespace py = pybind11;
using namespace edgelab;

namespace {

Point to_point(const std::vector<cplx>& c) { return Point(c); }

ModelParams params(int d, double tau, int n) {
    ModelParams p{d, tau, n};
    p.validate();
    return p;
}

ExpansionForm parse_form(const std::string& s) {
    if (s == "printed") return ExpansionForm::Printed;
    if (s == "rederived") return ExpansionForm::Rederived;
    throw UsageError("form must be 'printed' or 'rederived'");
}

std::vector<ExperimentSpec> select(const std::string& target, const std::string& config) {
    std::vector<ExperimentSpec> specs = config.empty() ? default_suite() : load_config(config);
    if (target == "all") return specs;
    const auto kind = parse_kind(target);
    std::vector<ExperimentSpec> keep;
    for (const auto& s : specs) {
        if ((kind && s.kind == *kind) || s.name == target) keep.push_back(s);
    }
    if (keep.empty()) throw UsageError("unknown experiment or kind '" + target + "'");
    return keep;
}

}  // namespace

PYBIND11_MODULE(_edgelab, m) {
    m.doc() = "Kernels, edge predictions and verification experiments for the elliptic random normal matrix model";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("erfc", [](cplx z) { return erfc_complex(z); }, py::arg("z"));
    m.def("erfcx", [](cplx z) { return erfcx_complex(z); }, py::arg("z"));

    m.def(
        "kernel_exact",
        [](int d, double tau, int n, const std::vector<cplx>& z, const std::vector<cplx>& w) {
            return kernel_exact(params(d, tau, n), to_point(z), to_point(w));
        },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("z"), py::arg("w"));
    m.def(
        "kernel_contour",
        [](int d, double tau, int n, const std::vector<cplx>& z, const std::vector<cplx>& w, int node_count) {
            ContourConfig c;
            c.node_count = node_count;
            return kernel_contour(params(d, tau, n), to_point(z), to_point(w), c);
        },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("z"), py::arg("w"), py::arg("node_count") = 512);
    m.def(
        "rho1",
        [](int d, double tau, int n, const std::vector<cplx>& z) { return rho1_density(params(d, tau, n), to_point(z)); },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("z"));

    m.def(
        "edge_point",
        [](int d, double tau, std::uint64_t seed) {
            const EdgePoint e = edge_point_sample(params(d, tau, 1), seed);
            py::dict out;
            out["z"] = e.z.coords();
            out["normal"] = e.normal.coords();
            out["kappa"] = e.kappa;
            out["eta"] = e.eta;
            return out;
        },
        py::arg("d"), py::arg("tau"), py::arg("seed"));
    m.def(
        "scaled_edge_density",
        [](int d, double tau, int n, std::uint64_t seed, double lambda) {
            const ModelParams p = params(d, tau, n);
            return scaled_edge_density(p, edge_point_sample(p, seed), lambda);
        },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("seed"), py::arg("lam"));
    m.def(
        "edge_density_prediction",
        [](int d, double tau, int n, std::uint64_t seed, double lambda, const std::string& form) {
            const ModelParams p = params(d, tau, n);
            return edge_density_prediction(p, edge_point_sample(p, seed), lambda, n, parse_form(form));
        },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("seed"), py::arg("lam"), py::arg("form") = "printed");
    m.def("edge_density_leading", &edge_density_leading, py::arg("d"), py::arg("lam"));
    m.def(
        "normalized_kernel",
        [](int d, double tau, int n, std::uint64_t seed, const std::vector<cplx>& u, const std::vector<cplx>& v) {
            const ModelParams p = params(d, tau, n);
            return normalized_kernel(p, edge_point_sample(p, seed), to_point(u), to_point(v)).L;
        },
        py::arg("d"), py::arg("tau"), py::arg("n"), py::arg("seed"), py::arg("u"), py::arg("v"));
    m.def(
        "edge_kernel_prediction",
        [](int d, double tau, std::uint64_t seed, const std::vector<cplx>& u, const std::vector<cplx>& v) {
            return edge_kernel_prediction(edge_point_sample(params(d, tau, 1), seed), to_point(u), to_point(v));
        },
        py::arg("d"), py::arg("tau"), py::arg("seed"), py::arg("u"), py::arg("v"));

    m.def(
        "fit_convergence_rate",
        [](const std::vector<std::pair<int, double>>& samples) { return fit_convergence_rate(samples); }, py::arg("samples"));

    m.def("experiment_names", []() {
        std::vector<std::string> names;
        for (const auto& s : default_suite()) names.push_back(s.name);
        return names;
    });
    m.def(
        "report_json",
        [](const std::string& target, const std::string& config, int threads) {
            auto specs = select(target, config);
            std::vector<ConvergenceReport> reps;
            {
                py::gil_scoped_release release;
                for (auto& s : specs) {
                    if (threads > 0) s.threads = threads;
                    reps.push_back(run_experiment(s));
                }
            }
            return emit_report(reps, ReportFormat::Json);
        },
        py::arg("target"), py::arg("config") = "", py::arg("threads") = 0);
}
