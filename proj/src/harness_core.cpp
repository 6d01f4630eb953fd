#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "edgelab/harness.hpp"

namespace edgelab {

namespace {

struct KindEntry {
    ExperimentKind kind;
    const char* name;
};

constexpr KindEntry kKinds[] = {
    {ExperimentKind::RepresentationEquivalence, "representation_equivalence"},
    {ExperimentKind::Tau0ClosedForm, "tau0_closed_form"},
    {ExperimentKind::TraceIdentity, "trace_identity"},
    {ExperimentKind::BulkLimit, "bulk_limit"},
    {ExperimentKind::EdgeDensity, "edge_density"},
    {ExperimentKind::EdgeKernel, "edge_kernel"},
    {ExperimentKind::RefinedD1, "refined_d1"},
    {ExperimentKind::SaddlePole, "saddle_pole"},
    {ExperimentKind::MaxPrinciple, "max_principle"},
    {ExperimentKind::PhiExpansion, "phi_expansion"},
    {ExperimentKind::DensityPointwise, "density_pointwise"},
};

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::vector<ParamPoint> grid(std::initializer_list<int> ds, std::initializer_list<double> taus) {
    std::vector<ParamPoint> out;
    for (int d : ds) {
        for (double t : taus) out.push_back({d, t});
    }
    return out;
}

int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

ExperimentSpec base(std::string name, ExperimentKind kind) {
    ExperimentSpec s;
    s.name = std::move(name);
    s.kind = kind;
    s.threads = default_threads();
    return s;
}

bool needs_params(ExperimentKind k) { return k != ExperimentKind::SaddlePole && k != ExperimentKind::MaxPrinciple; }

}  // namespace

std::string kind_name(ExperimentKind kind) {
    for (const auto& e : kKinds) {
        if (e.kind == kind) return e.name;
    }
    throw UsageError("kind_name: unknown kind");
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& e : kKinds) {
        if (key == e.name) return e.kind;
    }
    return std::nullopt;
}

std::vector<ExperimentKind> all_kinds() {
    std::vector<ExperimentKind> out;
    for (const auto& e : kKinds) out.push_back(e.kind);
    return out;
}

double ExperimentSpec::tol(const std::string& key) const {
    const auto it = tolerances.find(key);
    if (it == tolerances.end()) throw UsageError("experiment " + name + ": missing tolerance '" + key + "'");
    return it->second;
}

void ExperimentSpec::validate() const {
    const std::string who = "experiment " + name + ": ";
    if (n_grid.empty()) throw UsageError(who + "n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw UsageError(who + "n_grid entries must be positive");
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw UsageError(who + "n_grid must be strictly increasing");
    }
    if (needs_params(kind)) {
        if (params.empty()) throw UsageError(who + "params grid is empty");
        for (const auto& p : params) {
            if (p.d < 1) throw UsageError(who + "dimension must be >= 1");
            if (!(p.tau >= 0.0 && p.tau < 1.0)) throw UsageError(who + "tau must lie in [0,1)");
            if (kind == ExperimentKind::Tau0ClosedForm && p.tau != 0.0) throw UsageError(who + "requires tau = 0");
        }
    }
    if (samples < 1) throw UsageError(who + "samples must be >= 1");
    if (threads < 1) throw UsageError(who + "threads must be >= 1");
    const bool wants_lambda =
        kind == ExperimentKind::EdgeDensity || (kind == ExperimentKind::PhiExpansion && variant == "normal");
    if (wants_lambda && lambda_grid.empty()) throw UsageError(who + "lambda_grid is empty");
    if (kind == ExperimentKind::PhiExpansion && variant != "lemma" && variant != "normal") {
        throw UsageError(who + "variant must be 'lemma' or 'normal'");
    }
    contour.validate();
}

bool ExperimentSpec::operator==(const ExperimentSpec& o) const {
    return name == o.name && kind == o.kind && params == o.params && n_grid == o.n_grid && seed == o.seed &&
           tolerances == o.tolerances && samples == o.samples && threads == o.threads && lambda_grid == o.lambda_grid &&
           points == o.points && form == o.form && variant == o.variant && contour.node_count == o.contour.node_count &&
           contour.radius_offset == o.contour.radius_offset && contour.tolerance == o.contour.tolerance &&
           contour.max_doublings == o.contour.max_doublings && contour.pole_side == o.contour.pole_side;
}

bool Sample::operator==(const Sample& o) const {
    return d == o.d && tau == o.tau && n == o.n && same_double(error, o.error) && same_double(log_error, o.log_error) &&
           same_double(fitted_exponent, o.fitted_exponent) && pass == o.pass && label == o.label;
}

bool ConvergenceReport::operator==(const ConvergenceReport& o) const {
    return experiment == o.experiment && samples == o.samples && same_double(fitted_exponent, o.fitted_exponent) &&
           pass == o.pass && diagnostics == o.diagnostics;
}

double fit_convergence_rate_log(std::span<const std::pair<int, double>> log_samples) {
    if (log_samples.size() < 2) throw UsageError("fit_convergence_rate: at least two samples required");
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, le] : log_samples) {
        if (n < 1) throw UsageError("fit_convergence_rate: n must be positive");
        if (!std::isfinite(le)) throw DegenerateFit("fit_convergence_rate: zero error (exact agreement)");
        sx += std::log(static_cast<double>(n));
        sy += le;
    }
    const double m = static_cast<double>(log_samples.size());
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [n, le] : log_samples) {
        const double dx = std::log(static_cast<double>(n)) - mx;
        sxx += dx * dx;
        sxy += dx * (le - my);
    }
    if (sxx == 0.0) throw DegenerateFit("fit_convergence_rate: all n coincide");
    return sxy / sxx;
}

double fit_convergence_rate(std::span<const std::pair<int, double>> samples) {
    std::vector<std::pair<int, double>> logs;
    logs.reserve(samples.size());
    for (const auto& [n, e] : samples) {
        if (std::isnan(e) || e < 0.0) throw DegenerateFit("fit_convergence_rate: negative or NaN error");
        if (e == 0.0) throw DegenerateFit("fit_convergence_rate: zero error (exact agreement)");
        logs.emplace_back(n, std::log(e));
    }
    return fit_convergence_rate_log(logs);
}

std::vector<ExperimentSpec> default_specs(ExperimentKind kind) {
    std::vector<ExperimentSpec> out;
    switch (kind) {
        case ExperimentKind::RepresentationEquivalence: {
            auto s = base("representation_equivalence", kind);
            s.params = grid({1, 2, 3}, {0.0, 0.3, 0.7});
            s.n_grid = {2, 4, 8, 16};
            s.samples = 20;
            s.tolerances = {{"max_relative_error", 1e-8}, {"disc_radius", 1.5}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::Tau0ClosedForm: {
            auto s = base("tau0_closed_form", kind);
            s.params = grid({1, 2, 3}, {0.0});
            s.n_grid = {2, 4, 8, 16};
            s.samples = 20;
            s.tolerances = {{"max_relative_error", 1e-12}, {"disc_radius", 1.5}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::TraceIdentity: {
            auto s = base("trace_identity_d1", kind);
            s.params = grid({1}, {0.0, 0.3, 0.7});
            for (int n = 1; n <= 16; ++n) s.n_grid.push_back(n);
            s.samples = 1;
            s.tolerances = {{"max_relative_error", 1e-6}, {"mc_samples", 1e6}};
            out.push_back(s);
            auto t = base("trace_identity_d2", kind);
            t.params = grid({2}, {0.0, 0.5});
            for (int n = 1; n <= 8; ++n) t.n_grid.push_back(n);
            t.samples = 1;
            t.tolerances = {{"max_relative_error", 5e-3}, {"mc_samples", 1e6}};
            out.push_back(t);
            break;
        }
        case ExperimentKind::BulkLimit: {
            auto s = base("bulk_limit", kind);
            s.params = grid({1, 2}, {0.0, 0.25});
            s.n_grid = {256, 1024};
            s.samples = 3;
            s.tolerances = {{"max_ratio", 0.25}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::EdgeDensity: {
            auto s = base("edge_density_d1", kind);
            s.params = grid({1}, {0.0, 0.5});
            s.n_grid = {256, 1024, 4096};
            s.samples = 3;
            s.lambda_grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
            s.tolerances = {{"max_exponent", -0.8}, {"leading_factor", 1.5}, {"leading_n", 1024}};
            out.push_back(s);
            s.name = "edge_density_d2";
            s.params = grid({2}, {0.0, 0.5});
            s.n_grid = {256, 1024};
            out.push_back(s);
            break;
        }
        case ExperimentKind::EdgeKernel: {
            auto s = base("edge_kernel", kind);
            s.params = grid({1, 2, 3}, {0.0, 0.5});
            s.n_grid = {64, 256, 1024};
            s.samples = 10;
            s.tolerances = {{"max_band", 1.5}, {"max_discrepancy", 1e-6}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::RefinedD1: {
            auto s = base("refined_d1", kind);
            s.params = grid({1}, {0.5});
            s.n_grid = {1024, 4096};
            s.samples = 5;
            s.points = {cplx(0.3, 0.1), cplx(0.0, -0.2)};
            s.tolerances = {{"max_exponent", -0.8}, {"max_discrepancy", 1e-6}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::SaddlePole: {
            auto s = base("saddle_pole", kind);
            s.n_grid = {50, 200};
            s.samples = 1;
            s.points = {cplx(0.0, -0.4), cplx(0.2, -0.3)};
            s.tolerances = {{"l1", -1.0}, {"l2", 1.0}, {"envelope_factor", 10.0}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::MaxPrinciple: {
            auto s = base("max_principle", kind);
            s.n_grid = {16, 64, 256, 1024};
            s.samples = 50;
            s.tolerances = {{"max_violation", 1e-12}, {"max_saddle_residual", 1e-10}, {"grid_size", 1e4}};
            out.push_back(s);
            break;
        }
        case ExperimentKind::PhiExpansion: {
            auto s = base("phi_expansion_lemma", kind);
            s.params = grid({1, 2, 3}, {0.0, 0.5});
            s.n_grid = {100, 1000, 10000};
            s.samples = 5;
            s.variant = "lemma";
            s.tolerances = {{"max_exponent", -1.2}};
            out.push_back(s);
            s.name = "phi_expansion_normal";
            s.variant = "normal";
            s.lambda_grid = {-1.0, -0.5, 0.5, 1.0};
            out.push_back(s);
            break;
        }
        case ExperimentKind::DensityPointwise: {
            auto s = base("density_pointwise", kind);
            s.params = grid({2}, {0.0});
            s.n_grid = {1024};
            s.samples = 1;
            s.tolerances = {{"radius_inner", 0.5}, {"radius_edge", 1.0}, {"tol_inner", 0.02}, {"tol_edge", 0.05}};
            out.push_back(s);
            break;
        }
    }
    return out;
}

std::vector<ExperimentSpec> default_suite() {
    std::vector<ExperimentSpec> out;
    for (auto k : all_kinds()) {
        auto v = default_specs(k);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

cplx parse_complex(const std::string& raw) {
    std::string t;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    }
    auto bad = [&]() { return UsageError("cannot parse complex number '" + raw + "'"); };
    if (t.empty()) throw bad();
    if (t.front() == '(') {
        const std::regex pair(R"(\(([^,]+),([^,]+)\))");
        std::smatch m;
        if (!std::regex_match(t, m, pair)) throw bad();
        return {std::stod(m[1]), std::stod(m[2])};
    }
    const std::string num = R"([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)";
    const std::regex real_only("([-+]?" + num + ")");
    const std::regex imag_only("([-+]?)(" + num + ")?[ij]");
    const std::regex both("([-+]?" + num + ")([-+])(" + num + ")?[ij]");
    std::smatch m;
    try {
        if (std::regex_match(t, m, real_only)) return {std::stod(m[1]), 0.0};
        if (std::regex_match(t, m, imag_only)) {
            const double mag = m[2].matched ? std::stod(m[2]) : 1.0;
            return {0.0, m[1] == "-" ? -mag : mag};
        }
        if (std::regex_match(t, m, both)) {
            const double mag = m[3].matched ? std::stod(m[3]) : 1.0;
            return {std::stod(m[1]), m[2] == "-" ? -mag : mag};
        }
    } catch (const std::exception&) {
        throw bad();
    }
    throw bad();
}

std::string format_complex(cplx z) {
    std::ostringstream o;
    o.precision(17);
    o << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
    return o.str();
}

}  // namespace edgelab
