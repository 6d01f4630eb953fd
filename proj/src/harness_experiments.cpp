#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "edgelab/harness.hpp"
#include "edgelab/kernel.hpp"
#include "edgelab/predictors.hpp"
#include "edgelab/quadrature.hpp"
#include "edgelab/rng.hpp"

namespace edgelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

std::uint64_t task_stream(std::size_t p, int n, int item) {
    return CounterRng::mix((static_cast<std::uint64_t>(p) << 48) ^ (static_cast<std::uint64_t>(n) << 20) ^
                           static_cast<std::uint64_t>(item));
}

template <class T>
std::vector<T> map_tasks(int count, int threads, const std::function<T(int)>& fn) {
    std::vector<T> out(count);
    parallel_for(count, threads, [&](int i) { out[i] = fn(i); });
    return out;
}

Point fixed_u(int d) {
    const cplx c[3] = {{0.3, 0.2}, {-0.1, 0.25}, {0.2, -0.1}};
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = c[k % 3];
    return p;
}

Point fixed_v(int d) {
    const cplx c[3] = {{0.0, -0.2}, {0.15, 0.1}, {-0.3, 0.05}};
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = c[k % 3];
    return p;
}

Point random_disc_point(CounterRng& rng, int d, double radius) {
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = std::polar(radius * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * kPi));
    return p;
}

std::uint64_t edge_seed(const ExperimentSpec& spec, int item) { return spec.seed * 1000003ULL + static_cast<std::uint64_t>(item); }

struct Grid {
    // index [param][n]
    std::vector<std::vector<double>> log_err;
    std::vector<std::vector<std::string>> labels;
};

void add_samples(const ExperimentSpec& spec, ConvergenceReport& rep, const Grid& g) {
    for (std::size_t p = 0; p < spec.params.size(); ++p) {
        for (std::size_t j = 0; j < spec.n_grid.size(); ++j) {
            Sample s;
            s.d = spec.params[p].d;
            s.tau = spec.params[p].tau;
            s.n = spec.n_grid[j];
            s.log_error = g.log_err[p][j];
            s.error = std::exp(s.log_error);
            if (!g.labels.empty()) s.label = g.labels[p][j];
            rep.samples.push_back(s);
        }
    }
}

double group_slope(const ExperimentSpec& spec, const std::vector<double>& log_err) {
    if (spec.n_grid.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<int, double>> pts;
    for (std::size_t j = 0; j < spec.n_grid.size(); ++j) pts.emplace_back(spec.n_grid[j], log_err[j]);
    try {
        return fit_convergence_rate_log(pts);
    } catch (const DegenerateFit&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Fills per-sample slope and pass from per-parameter verdicts.
void finalize(const ExperimentSpec& spec, ConvergenceReport& rep, const Grid& g, const std::vector<bool>& pass) {
    add_samples(spec, rep, g);
    rep.pass = true;
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t p = 0; p < spec.params.size(); ++p) {
        const double slope = group_slope(spec, g.log_err[p]);
        for (auto& s : rep.samples) {
            if (s.d == spec.params[p].d && s.tau == spec.params[p].tau) {
                s.fitted_exponent = slope;
                s.pass = pass[p];
            }
        }
        if (!std::isnan(slope) && (std::isnan(rep.fitted_exponent) || slope > rep.fitted_exponent)) rep.fitted_exponent = slope;
        rep.pass = rep.pass && pass[p];
    }
}

std::string fmt(double x) {
    std::ostringstream o;
    o.precision(4);
    o << x;
    return o.str();
}

std::string param_tag(const ParamPoint& p) { return "d=" + std::to_string(p.d) + " tau=" + fmt(p.tau); }

// Max over items of a per-item log error, for every (param, n).
Grid max_grid(const ExperimentSpec& spec, int items, const std::function<double(const ParamPoint&, int, int)>& f) {
    const int P = static_cast<int>(spec.params.size());
    const int N = static_cast<int>(spec.n_grid.size());
    const auto vals = map_tasks<double>(P * N * items, spec.threads, [&](int t) {
        const int item = t % items;
        const int j = (t / items) % N;
        const int p = t / (items * N);
        return f(spec.params[p], spec.n_grid[j], item);
    });
    Grid g;
    g.log_err.assign(P, std::vector<double>(N, kNegInf));
    for (int t = 0; t < P * N * items; ++t) {
        const int j = (t / items) % N;
        const int p = t / (items * N);
        g.log_err[p][j] = std::max(g.log_err[p][j], vals[t]);
    }
    return g;
}

void run_representation(const ExperimentSpec& spec, ConvergenceReport& rep, bool closed_form) {
    const double tol = spec.tol("max_relative_error");
    const double radius = spec.tol("disc_radius");
    Grid g = max_grid(spec, spec.samples, [&](const ParamPoint& pp, int n, int item) {
        const ModelParams params{pp.d, pp.tau, n};
        CounterRng rng(spec.seed, task_stream(static_cast<std::size_t>(pp.d * 1000 + std::lround(pp.tau * 1000)), n, item));
        const Point Z = random_disc_point(rng, pp.d, radius);
        const Point W = random_disc_point(rng, pp.d, radius);
        const cplx a = kernel_exact(params, Z, W);
        const cplx b = closed_form ? kernel_tau0_closed(params, Z, W) : kernel_contour(params, Z, W, spec.contour);
        return safe_log(std::abs(a - b) / std::abs(a));
    });
    std::vector<bool> pass;
    for (const auto& row : g.log_err) pass.push_back(*std::max_element(row.begin(), row.end()) <= std::log(tol));
    finalize(spec, rep, g, pass);
}

double trace_quadrature_d1(const ModelParams& params) {
    const double tau = params.tau;
    const double R = std::sqrt(params.n * (1.0 + tau) / (1.0 - tau)) + 9.0 / std::sqrt(1.0 - tau);
    const int order = 20;
    const auto rule = gauss_legendre<double>(order);
    const int panels = static_cast<int>(std::ceil(R / 1.0));
    const int M = tau == 0.0 ? 16 : 256;
    CompensatedSum total;
    for (int pnl = 0; pnl < panels; ++pnl) {
        const double a = R * pnl / panels, b = R * (pnl + 1) / panels;
        for (int i = 0; i < order; ++i) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
            const double wr = 0.5 * (b - a) * rule.weights[i] * r;
            double ring = 0.0;
            for (int m = 0; m < M; ++m) {
                const Point z{std::polar(r, 2.0 * kPi * m / M)};
                ring += kernel_exact(params, z, z).real();
            }
            total.add(wr * ring * 2.0 * kPi / M);
        }
    }
    return total.result().real();
}

// Importance sampling with a two-scale Gaussian mixture proposal aligned with the droplet axes.
double trace_monte_carlo(const ModelParams& params, std::uint64_t seed, long samples) {
    const double tau = params.tau;
    const double ax = std::sqrt(params.n * (1.0 + tau) / (1.0 - tau));
    const double ay = std::sqrt(params.n * (1.0 - tau) / (1.0 + tau));
    const double scale[2] = {0.3, 0.6};
    const double weight[2] = {0.3, 0.7};
    double sx[2], sy[2], lnorm[2];
    for (int c = 0; c < 2; ++c) {
        sx[c] = scale[c] * ax + 0.4 / std::sqrt(1.0 - tau);
        sy[c] = scale[c] * ay + 0.4 / std::sqrt(1.0 + tau);
        lnorm[c] = -params.d * std::log(2.0 * kPi * sx[c] * sy[c]);
    }
    CounterRng rng(seed, static_cast<std::uint64_t>(params.n) * 7919 + params.d);
    CompensatedSum acc;
    Point z(params.d);
    for (long i = 0; i < samples; ++i) {
        const int c = rng.uniform() < weight[0] ? 0 : 1;
        for (int k = 0; k < params.d; ++k) z[k] = cplx(sx[c] * rng.normal(), sy[c] * rng.normal());
        double q = 0.0;
        for (int m = 0; m < 2; ++m) {
            double e = lnorm[m];
            for (int k = 0; k < params.d; ++k) {
                e -= 0.5 * (z[k].real() * z[k].real() / (sx[m] * sx[m]) + z[k].imag() * z[k].imag() / (sy[m] * sy[m]));
            }
            q += weight[m] * std::exp(e);
        }
        acc.add(kernel_exact(params, z, z).real() / q);
    }
    return acc.result().real() / static_cast<double>(samples);
}

void run_trace(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double tol = spec.tol("max_relative_error");
    const long mc = static_cast<long>(spec.tol("mc_samples"));
    Grid g = max_grid(spec, 1, [&](const ParamPoint& pp, int n, int) {
        const ModelParams params{pp.d, pp.tau, n};
        const double exact = binomial(n + pp.d - 1, pp.d);
        const double value = pp.d == 1 ? trace_quadrature_d1(params) : trace_monte_carlo(params, spec.seed, mc);
        return safe_log(std::abs(value - exact) / exact);
    });
    std::vector<bool> pass;
    for (const auto& row : g.log_err) pass.push_back(*std::max_element(row.begin(), row.end()) <= std::log(tol));
    finalize(spec, rep, g, pass);
}

std::pair<Point, Point> bulk_pair(int d, int item) {
    Point u(d), v(d);
    if (item == 1) {
        u = fixed_u(d);
        v = fixed_v(d);
    } else if (item == 2) {
        const cplx cu[2] = {{0.5, 0.0}, {0.0, 0.4}}, cv[2] = {{-0.3, 0.3}, {0.2, 0.0}};
        for (int k = 0; k < d; ++k) {
            u[k] = cu[k % 2];
            v[k] = cv[k % 2];
        }
    }
    return {u, v};
}

void run_bulk(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double ratio = spec.tol("max_ratio");
    const int P = static_cast<int>(spec.params.size());
    const int N = static_cast<int>(spec.n_grid.size());
    const int items = 3;
    struct Out {
        double log_err = kNegInf;
        double direct_gap = 0.0;
    };
    const auto vals = map_tasks<Out>(P * N * items, spec.threads, [&](int t) {
        const int item = t % items;
        const int j = (t / items) % N;
        const int p = t / (items * N);
        const ParamPoint pp = spec.params[p];
        const int n = spec.n_grid[j];
        const ModelParams params{pp.d, pp.tau, n};
        const EdgePoint e = edge_point_sample(params, edge_seed(spec, 0));
        const Point z = 0.5 * e.z;
        const auto [u, v] = bulk_pair(pp.d, item);
        ContourResult res;
        if (pp.tau == 0.0) {
            res = integral_I_zero(params, zeta_tau0(n, z, u, v), spec.contour);
        } else {
            const ZPair zp = zpm_map(params, z, u, v);
            res = integral_I_tau(params, saddle_frame(params, zp.plus, zp.minus), spec.contour);
        }
        if (res.residue != 1.0) throw ConsistencyError("bulk point: pole not enclosed by the saddle circle");
        const cplx g = dot(u, v) - 0.5 * (u.norm2() + v.norm2());
        Out o;
        o.log_err = -pp.d * std::log(kPi) + g.real() + res.circle.log_mag;
        const double sn = std::sqrt(static_cast<double>(n));
        cplx k = kernel_exact(params, sn * z + u, sn * z + v);
        k *= cofactor_cn(pp.tau, n, z, u) * std::conj(cofactor_cn(pp.tau, n, z, v));
        const cplx pred = bulk_prediction(pp.d, u, v);
        o.direct_gap = std::abs(k - pred) / std::abs(pred);
        return o;
    });
    Grid g;
    g.log_err.assign(P, std::vector<double>(N, kNegInf));
    double worst_direct = 0.0;
    for (int t = 0; t < P * N * items; ++t) {
        const int j = (t / items) % N;
        const int p = t / (items * N);
        g.log_err[p][j] = std::max(g.log_err[p][j], vals[t].log_err);
        worst_direct = std::max(worst_direct, vals[t].direct_gap);
    }
    std::vector<bool> pass(P, true);
    for (int p = 0; p < P; ++p) {
        for (int j = 1; j < N; ++j) {
            if (!(g.log_err[p][j] <= std::log(ratio) + g.log_err[p][j - 1])) pass[p] = false;
        }
    }
    rep.diagnostics.push_back("direct-sum kernel vs bulk limit, max relative gap: " + fmt(worst_direct));
    finalize(spec, rep, g, pass);
}

void run_edge_density(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double max_exp = spec.tol("max_exponent");
    const double lead_factor = spec.tol("leading_factor");
    const int lead_n = static_cast<int>(spec.tol("leading_n"));
    const int P = static_cast<int>(spec.params.size());
    const int N = static_cast<int>(spec.n_grid.size());
    const int L = static_cast<int>(spec.lambda_grid.size());
    const int items = spec.samples * L;
    const ExpansionForm other = spec.form == ExpansionForm::Printed ? ExpansionForm::Rederived : ExpansionForm::Printed;
    struct Out {
        double res = 0.0, res_other = 0.0, lead_gap = 0.0, second = 0.0;
    };
    const auto vals = map_tasks<Out>(P * N * items, spec.threads, [&](int t) {
        const int item = t % items;
        const int j = (t / items) % N;
        const int p = t / (items * N);
        const ParamPoint pp = spec.params[p];
        const int n = spec.n_grid[j];
        const ModelParams params{pp.d, pp.tau, n};
        const EdgePoint e = edge_point_sample(params, edge_seed(spec, item / L));
        const double lambda = spec.lambda_grid[item % L];
        const double val = scaled_edge_density(params, e, lambda);
        const double lead = edge_density_leading(pp.d, lambda);
        Out o;
        o.res = std::abs(val - edge_density_prediction(params, e, lambda, n, spec.form));
        o.res_other = std::abs(val - edge_density_prediction(params, e, lambda, n, other));
        o.lead_gap = std::abs(val - lead);
        o.second = std::abs(edge_density_prediction(params, e, lambda, n, ExpansionForm::Printed) - lead);
        return o;
    });
    Grid g;
    g.log_err.assign(P, std::vector<double>(N, kNegInf));
    std::vector<std::vector<double>> other_err(P, std::vector<double>(N, kNegInf));
    // per param, per edge point: max_lambda gap, max_lambda second term at lead_n
    std::vector<std::map<int, std::pair<double, double>>> lead(P);
    for (int t = 0; t < P * N * items; ++t) {
        const int item = t % items;
        const int j = (t / items) % N;
        const int p = t / (items * N);
        g.log_err[p][j] = std::max(g.log_err[p][j], safe_log(vals[t].res));
        other_err[p][j] = std::max(other_err[p][j], safe_log(vals[t].res_other));
        if (spec.n_grid[j] == lead_n) {
            auto& slot = lead[p][item / L];
            slot.first = std::max(slot.first, vals[t].lead_gap);
            slot.second = std::max(slot.second, vals[t].second);
        }
    }
    std::vector<bool> pass(P);
    for (int p = 0; p < P; ++p) {
        const double slope = group_slope(spec, g.log_err[p]);
        const double slope_other = group_slope(spec, other_err[p]);
        bool lead_ok = true;
        double worst_ratio = 0.0;
        for (const auto& [pt, v] : lead[p]) {
            worst_ratio = std::max(worst_ratio, v.first / v.second);
            if (!(v.first <= lead_factor * v.second)) lead_ok = false;
        }
        const bool rate_ok = slope <= max_exp;
        pass[p] = rate_ok && lead_ok;
        std::ostringstream d;
        d << param_tag(spec.params[p]) << ": residual exponent " << fmt(slope) << " ("
          << (spec.form == ExpansionForm::Printed ? "printed" : "rederived") << " correction term), "
          << (other == ExpansionForm::Printed ? "printed" : "rederived") << " form exponent " << fmt(slope_other);
        if (!lead[p].empty()) d << "; leading gap / second term at n=" << lead_n << ": " << fmt(worst_ratio);
        rep.diagnostics.push_back(d.str());
    }
    finalize(spec, rep, g, pass);
}

void run_edge_kernel(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double band = spec.tol("max_band");
    const double max_disc = spec.tol("max_discrepancy");
    const int P = static_cast<int>(spec.params.size());
    const int N = static_cast<int>(spec.n_grid.size());
    struct Out {
        double err = 0.0, disc = 0.0;
    };
    const auto vals = map_tasks<Out>(P * N * spec.samples, spec.threads, [&](int t) {
        const int item = t % spec.samples;
        const int j = (t / spec.samples) % N;
        const int p = t / (spec.samples * N);
        const ParamPoint pp = spec.params[p];
        const int n = spec.n_grid[j];
        const ModelParams params{pp.d, pp.tau, n};
        const EdgePoint e = edge_point_sample(params, edge_seed(spec, item));
        const Point u = fixed_u(pp.d), v = fixed_v(pp.d);
        const auto s = normalized_kernel(params, e, u, v, spec.contour, max_disc);
        return Out{std::abs(s.L - edge_kernel_prediction(e, u, v)), s.discrepancy};
    });
    Grid g;
    g.log_err.assign(P, std::vector<double>(N, kNegInf));
    double worst_disc = 0.0;
    for (int t = 0; t < P * N * spec.samples; ++t) {
        const int j = (t / spec.samples) % N;
        const int p = t / (spec.samples * N);
        g.log_err[p][j] = std::max(g.log_err[p][j], safe_log(vals[t].err));
        worst_disc = std::max(worst_disc, vals[t].disc);
    }
    std::vector<bool> pass(P);
    for (int p = 0; p < P; ++p) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int j = 0; j < N; ++j) {
            const double m = std::exp(g.log_err[p][j]) * std::sqrt(static_cast<double>(spec.n_grid[j]));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        pass[p] = hi <= band * lo;
        rep.diagnostics.push_back(param_tag(spec.params[p]) + ": sqrt(n)-scaled residual band max/min " + fmt(hi / lo) +
                                  " (range " + fmt(lo) + " .. " + fmt(hi) + ")");
    }
    rep.diagnostics.push_back("route discrepancy max: " + fmt(worst_disc));
    finalize(spec, rep, g, pass);
}

void run_refined_d1(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double max_exp = spec.tol("max_exponent");
    if (spec.points.size() < 2) throw UsageError("refined_d1: points must hold u and v");
    const cplx u = spec.points[0], v = spec.points[1];
    Grid g = max_grid(spec, spec.samples, [&](const ParamPoint& pp, int n, int item) {
        if (pp.d != 1) throw UsageError("refined_d1: requires d = 1");
        const ModelParams params{1, pp.tau, n};
        const EdgePoint e = edge_point_sample(params, edge_seed(spec, item));
        const Point U = u * e.normal, V = v * e.normal;
        const auto s = normalized_kernel(params, e, U, V, spec.contour, spec.tol("max_discrepancy"));
        const cplx kc = s.L * std::exp(dot(U, V) - 0.5 * (U.norm2() + V.norm2())) / kPi;
        return safe_log(std::abs(kc - d1_refined_prediction(e, u, v, n)));
    });
    std::vector<bool> pass;
    for (std::size_t p = 0; p < spec.params.size(); ++p) pass.push_back(group_slope(spec, g.log_err[p]) <= max_exp);
    finalize(spec, rep, g, pass);
}

void run_saddle_pole(const ExperimentSpec& spec, ConvergenceReport& rep) {
    if (spec.points.size() != spec.n_grid.size()) throw UsageError("saddle_pole: one pole point per n required");
    const double l1 = spec.tol("l1"), l2 = spec.tol("l2");
    const double factor = spec.tol("envelope_factor");
    const int N = static_cast<int>(spec.n_grid.size());
    const auto vals = map_tasks<PoleIntegralCheck>(N, spec.threads, [&](int j) {
        return pole_gaussian_integral_mp(spec.n_grid[j], spec.points[j], l1, l2);
    });
    ExperimentSpec flat = spec;
    flat.params = {ParamPoint{0, 0.0}};
    Grid g;
    g.log_err.assign(1, std::vector<double>(N));
    g.labels.assign(1, std::vector<std::string>(N));
    bool ok = true;
    for (int j = 0; j < N; ++j) {
        g.log_err[0][j] = safe_log(vals[j].abs_difference);
        const double env = factor / 10.0 * vals[j].envelope;
        std::ostringstream lab;
        lab << "p=" << spec.points[j].real() << (spec.points[j].imag() < 0 ? "" : "+") << spec.points[j].imag() << "i";
        g.labels[0][j] = lab.str();
        if (!(vals[j].abs_difference <= env)) ok = false;
        rep.diagnostics.push_back(lab.str() + " n=" + std::to_string(spec.n_grid[j]) + ": |lhs-rhs| " +
                                  fmt(vals[j].abs_difference) + " envelope " + fmt(env));
    }
    finalize(flat, rep, g, {ok});
}

void run_max_principle(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double max_violation = spec.tol("max_violation");
    const double max_residual = spec.tol("max_saddle_residual");
    const int grid = static_cast<int>(spec.tol("grid_size"));
    const int N = static_cast<int>(spec.n_grid.size());
    struct Out {
        int j = 0;
        double violation = 0.0, residual = 0.0;
        bool located = true;
    };
    const auto vals = map_tasks<Out>(spec.samples, spec.threads, [&](int i) {
        CounterRng rng(spec.seed, task_stream(99, 0, i));
        Out o;
        o.j = i % N;
        const int n = spec.n_grid[o.j];
        const double tau = rng.uniform(0.1, 0.9);
        const int d = 1 + static_cast<int>(rng.uniform() * 3.0);
        const ModelParams params{d, tau, n};
        const EdgePoint e = edge_point_sample(params, rng.next_bits());
        const Point u = random_disc_point(rng, d, 1.0 / std::sqrt(static_cast<double>(d)));
        const Point v = random_disc_point(rng, d, 1.0 / std::sqrt(static_cast<double>(d)));
        const ZPair zp = zpm_map(params, e.z, u, v);
        const SaddleFrame f = saddle_frame(params, zp.plus, zp.minus);
        o.residual = *std::max_element(f.residuals.begin(), f.residuals.end());
        const auto mp = max_principle_check(f, grid);
        o.violation = mp.max_violation;
        double gap = std::abs(std::remainder(mp.argmax_angle - std::arg(f.a_inv), 2.0 * kPi));
        o.located = gap <= mp.grid_step * (1.0 + 1e-9);
        return o;
    });
    ExperimentSpec flat = spec;
    flat.params = {ParamPoint{0, 0.0}};
    Grid g;
    g.log_err.assign(1, std::vector<double>(N, kNegInf));
    double worst_res = 0.0, worst_vio = -std::numeric_limits<double>::infinity();
    bool located = true;
    for (const auto& o : vals) {
        g.log_err[0][o.j] = std::max(g.log_err[0][o.j], safe_log(std::max(o.violation, 0.0)));
        worst_res = std::max(worst_res, o.residual);
        worst_vio = std::max(worst_vio, o.violation);
        located = located && o.located;
    }
    rep.diagnostics.push_back("frames: " + std::to_string(spec.samples) + ", max |F'| at saddles " + fmt(worst_res) +
                              ", max violation " + fmt(worst_vio) + ", argmax at a^-1: " + (located ? "yes" : "no"));
    finalize(flat, rep, g, {worst_res <= max_residual && worst_vio <= max_violation && located});
}

void run_phi(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double max_exp = spec.tol("max_exponent");
    const bool normal = spec.variant == "normal";
    const int L = normal ? static_cast<int>(spec.lambda_grid.size()) : 1;
    const ExpansionForm other = spec.form == ExpansionForm::Printed ? ExpansionForm::Rederived : ExpansionForm::Printed;
    auto residual = [&](const ParamPoint& pp, int n, int item, ExpansionForm form) {
        const ModelParams params{pp.d, pp.tau, n};
        const EdgePoint e = edge_point_sample(params, edge_seed(spec, item / L));
        const double sn = std::sqrt(static_cast<double>(n));
        Point u = fixed_u(pp.d), v = fixed_v(pp.d);
        double lambda = 0.0;
        if (normal) {
            lambda = spec.lambda_grid[item % L];
            u = lambda * e.normal;
            v = u;
        }
        const cplx i(0.0, 1.0);
        if (pp.tau == 0.0) {
            const cplx zeta = zeta_tau0(n, e.z, u, v);
            const cplx iphi = i * phi_at_pole_zero(zeta).phi_at_pole;
            const cplx pred = normal ? phi_normal_specialization(0.0, 0.0, lambda, n, form) / sn : phi_lemma_tau0(zeta - 1.0);
            return std::abs(iphi - pred);
        }
        const ZPair zp = zpm_map(params, e.z, u, v);
        const SaddleFrame f = saddle_frame(params, zp.plus, zp.minus);
        const cplx iphi = i * phi_at_pole(params, f).phi_at_pole;
        const cplx pred = normal ? cplx(phi_normal_specialization(pp.tau, e.eta, lambda, n, form) / sn)
                                 : phi_lemma_tau(e, delta_pm(align_to_edge(zp, e), e));
        return std::abs(iphi - pred);
    };
    Grid g = max_grid(spec, spec.samples * L,
                      [&](const ParamPoint& pp, int n, int item) { return safe_log(residual(pp, n, item, spec.form)); });
    std::vector<bool> pass;
    for (std::size_t p = 0; p < spec.params.size(); ++p) {
        const double slope = group_slope(spec, g.log_err[p]);
        pass.push_back(slope <= max_exp);
        std::string line = param_tag(spec.params[p]) + ": residual exponent " + fmt(slope);
        if (normal && spec.params[p].tau != 0.0) {
            Grid go = max_grid(spec, spec.samples * L, [&](const ParamPoint& pp, int n, int item) {
                return pp == spec.params[p] ? safe_log(residual(pp, n, item, other)) : 0.0;
            });
            line += std::string(", ") + (other == ExpansionForm::Printed ? "printed" : "rederived") + " form exponent " +
                    fmt(group_slope(spec, go.log_err[p]));
        }
        rep.diagnostics.push_back(line);
    }
    finalize(spec, rep, g, pass);
}

void run_density_pointwise(const ExperimentSpec& spec, ConvergenceReport& rep) {
    const double radii[2] = {spec.tol("radius_inner"), spec.tol("radius_edge")};
    const double tols[2] = {spec.tol("tol_inner"), spec.tol("tol_edge")};
    const int P = static_cast<int>(spec.params.size());
    const int N = static_cast<int>(spec.n_grid.size());
    std::vector<bool> pass(P, true);
    for (int which = 0; which < 2; ++which) {
        Grid g = max_grid(spec, 1, [&](const ParamPoint& pp, int n, int) {
            if (pp.tau != 0.0) throw UsageError("density_pointwise: requires tau = 0");
            const ModelParams params{pp.d, 0.0, n};
            const EdgePoint e = edge_point_sample(params, edge_seed(spec, 0));
            const double r = radii[which];
            const double target = (r < 1.0 ? 1.0 : 0.5) * std::tgamma(pp.d + 1.0) / std::pow(kPi, pp.d);
            const Point x = (std::sqrt(static_cast<double>(n)) * r) * e.z;
            const double val = std::pow(static_cast<double>(n), pp.d) * rho1_density(params, x);
            return safe_log(std::abs(val / target - 1.0));
        });
        g.labels.assign(P, std::vector<std::string>(N, "|z|=" + fmt(radii[which])));
        for (int p = 0; p < P; ++p) {
            for (int j = 0; j < N; ++j) {
                if (!(g.log_err[p][j] <= std::log(tols[which]))) pass[p] = false;
            }
        }
        add_samples(spec, rep, g);
    }
    rep.pass = std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
    rep.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    for (auto& s : rep.samples) {
        s.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
        for (int p = 0; p < P; ++p) {
            if (s.d == spec.params[p].d && s.tau == spec.params[p].tau) s.pass = pass[p];
        }
    }
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int workers = std::max(1, std::min(threads, count));
    std::vector<std::exception_ptr> errors(count);
    auto body = [&](int w) {
        for (int i = w; i < count; i += workers) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

ConvergenceReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ConvergenceReport rep;
    rep.experiment = spec;
    switch (spec.kind) {
        case ExperimentKind::RepresentationEquivalence: run_representation(spec, rep, false); break;
        case ExperimentKind::Tau0ClosedForm: run_representation(spec, rep, true); break;
        case ExperimentKind::TraceIdentity: run_trace(spec, rep); break;
        case ExperimentKind::BulkLimit: run_bulk(spec, rep); break;
        case ExperimentKind::EdgeDensity: run_edge_density(spec, rep); break;
        case ExperimentKind::EdgeKernel: run_edge_kernel(spec, rep); break;
        case ExperimentKind::RefinedD1: run_refined_d1(spec, rep); break;
        case ExperimentKind::SaddlePole: run_saddle_pole(spec, rep); break;
        case ExperimentKind::MaxPrinciple: run_max_principle(spec, rep); break;
        case ExperimentKind::PhiExpansion: run_phi(spec, rep); break;
        case ExperimentKind::DensityPointwise: run_density_pointwise(spec, rep); break;
    }
    return rep;
}

}  // namespace edgelab
