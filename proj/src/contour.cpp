#include "edgelab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edgelab/errors.hpp"
#include "edgelab/kernel.hpp"

namespace edgelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

LogMagnitudePhase times_exp(LogMagnitudePhase a, cplx log_factor) {
    if (a.is_zero()) return a;
    a.log_mag += log_factor.real();
    a.phase *= std::polar(1.0, log_factor.imag());
    return a;
}

// |a - b| / |a|
double relative_gap(const LogMagnitudePhase& a, const LogMagnitudePhase& b) {
    if (a.is_zero()) return b.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    if (b.is_zero()) return 1.0;
    return std::abs(std::exp(b.log_mag - a.log_mag) * b.phase - a.phase);
}

// -(1/2 pi i) closed integral of exp(log_f(s)) ds over |s| = r, trapezoid with M nodes
template <class LogIntegrand>
LogMagnitudePhase trapezoid(const LogIntegrand& log_f, double r, int M) {
    std::vector<LogMagnitudePhase> terms(M);
    const double lr = std::log(r);
    const double lm = std::log(static_cast<double>(M));
    for (int m = 0; m < M; ++m) {
        const double theta = kTwoPi * m / M;
        const cplx s = std::polar(r, theta);
        const cplx L = log_f(s) + cplx(lr, theta);
        terms[m] = {L.real() - lm, -std::polar(1.0, L.imag())};
    }
    return stable_sum(terms);
}

template <class LogIntegrand>
ContourResult adaptive_circle(const LogIntegrand& log_f, double r, double residue, int n, const ContourConfig& cfg) {
    int M = std::max(cfg.node_count, static_cast<int>(std::ceil(64.0 * std::sqrt(static_cast<double>(n)))));
    LogMagnitudePhase prev = trapezoid(log_f, r, M);
    double gap = 0.0;
    for (int k = 0; k < cfg.max_doublings; ++k) {
        M *= 2;
        LogMagnitudePhase cur = trapezoid(log_f, r, M);
        gap = relative_gap(cur, prev);
        if (gap <= cfg.tolerance) {
            ContourResult res;
            res.circle = cur;
            res.residue = residue;
            res.radius = r;
            res.nodes = M;
            res.convergence = gap;
            if (residue != 0.0) {
                const LogMagnitudePhase parts[2] = {cur, LogMagnitudePhase::from_value(residue)};
                res.normalized = stable_sum(parts);
            } else {
                res.normalized = cur;
            }
            res.value = res.normalized.value();
            return res;
        }
        prev = cur;
    }
    std::ostringstream msg;
    msg << "contour quadrature did not converge: radius " << r << ", nodes " << M << ", last relative change " << gap;
    throw QuadratureError(msg.str());
}

void check_clearance(double r, double pole, int n) {
    if (std::abs(r - pole) < 1e-3 / std::sqrt(static_cast<double>(n))) {
        throw ContourError("contour passes within 1e-3/sqrt(n) of the pole");
    }
}

}  // namespace

void ContourConfig::validate() const {
    if (node_count < 64) throw UsageError("ContourConfig: node_count must be >= 64");
    if (!(tolerance > 0.0)) throw UsageError("ContourConfig: tolerance must be positive");
    if (!(radius_offset > 0.0)) throw UsageError("ContourConfig: radius_offset must be positive");
    if (max_doublings < 1) throw UsageError("ContourConfig: max_doublings must be >= 1");
}

ContourResult integral_I_tau(const ModelParams& params, const SaddleFrame& frame, const ContourConfig& cfg) {
    params.validate();
    cfg.validate();
    const double tau = params.tau;
    if (!(tau > 0.0)) throw UsageError("integral_I_tau: requires tau > 0 (use integral_I_zero)");
    const double sn = std::sqrt(static_cast<double>(params.n));
    const double r0 = std::abs(frame.a_inv);
    const double clear = cfg.radius_offset * std::min(tau, 1.0 - tau) / (2.0 * sn);
    const double r_hi = 1.0 - (1.0 - tau) / (4.0 * sn);
    const bool enclose = cfg.pole_side == PoleSide::Auto ? r0 > tau : cfg.pole_side == PoleSide::Enclose;
    double r = enclose ? std::min(std::max(r0, tau + clear), r_hi) : std::max(std::min(r0, tau - clear), 1e-8);
    check_clearance(r, tau, params.n);

    const PhaseFunction F = frame.phase();
    const double n = params.n;
    const double half_d = 0.5 * params.d;
    const double norm = half_d * std::log(1.0 - tau * tau);
    auto log_f = [&](cplx s) {
        const cplx w = 1.0 - s * s;
        if (!(w.real() > 0.0)) throw ContourError("integral_I_tau: branch cut of (1-s^2)^{d/2} reached");
        return n * F.minus_pole(s) - std::log(s - tau) - half_d * std::log(w) + norm;
    };
    return adaptive_circle(log_f, r, enclose ? 1.0 : 0.0, params.n, cfg);
}

ContourResult integral_I_zero(const ModelParams& params, cplx zeta, const ContourConfig& cfg) {
    params.validate();
    cfg.validate();
    require_finite(zeta, "integral_I_zero");
    if (zeta == 0.0) {
        ContourResult res;
        res.value = 1.0;
        res.normalized = {0.0, cplx(1.0, 0.0)};
        res.circle = LogMagnitudePhase::zero();
        res.residue = 0.0;
        return res;
    }
    const double sn = std::sqrt(static_cast<double>(params.n));
    const double r0 = 1.0 / std::abs(zeta);
    const double clear = cfg.radius_offset / (2.0 * sn);
    const bool enclose = cfg.pole_side == PoleSide::Auto ? r0 > 1.0 : cfg.pole_side == PoleSide::Enclose;
    double r = enclose ? std::max(r0, 1.0 + clear) : std::max(std::min(r0, 1.0 - clear), 1e-8);
    check_clearance(r, 1.0, params.n);
    const double n = params.n;
    auto log_f = [&](cplx s) { return n * (zeta * (s - 1.0) - std::log(s)) - std::log(s - 1.0); };
    return adaptive_circle(log_f, r, enclose ? 1.0 : 0.0, params.n, cfg);
}

LogMagnitudePhase kernel_contour_log(const ModelParams& params, const Point& Z, const Point& W, const ContourConfig& cfg) {
    params.validate();
    require_dimension(Z, params.d, "kernel_contour");
    require_dimension(W, params.d, "kernel_contour");
    const double tau = params.tau;
    const double rn = 1.0 / std::sqrt(static_cast<double>(params.n));
    const double base = -params.d * std::log(std::numbers::pi);
    if (tau == 0.0) {
        const cplx zw = dot(Z, W);
        const auto res = integral_I_zero(params, zw / static_cast<double>(params.n), cfg);
        return times_exp(res.normalized, base - 0.5 * (Z.norm2() + W.norm2()) + zw);
    }
    const ZPair zp = zpm_pair(tau, rn * Z, rn * W);
    const SaddleFrame frame = saddle_frame(params, zp.plus, zp.minus);
    const auto res = integral_I_tau(params, frame, cfg);
    double lw = 0.0;
    for (int k = 0; k < params.d; ++k) lw += 0.5 * (log_weight_omega(Z[k], tau) + log_weight_omega(W[k], tau));
    const Point Wc = W.conj();
    const cplx nF = 0.25 * (1.0 - tau) * (Z + Wc).square_sum() - 0.25 * (1.0 + tau) * (Z - Wc).square_sum();
    return times_exp(res.normalized, base + lw + nF);
}

cplx kernel_contour(const ModelParams& params, const Point& Z, const Point& W, const ContourConfig& cfg) {
    return kernel_contour_log(params, Z, W, cfg).value();
}

MaxPrincipleResult max_principle_check(const SaddleFrame& frame, int grid_size) {
    if (grid_size < 8) throw UsageError("max_principle_check: grid_size must be >= 8");
    const PhaseFunction F = frame.phase();
    const double r = std::abs(frame.a_inv);
    const double ref = F.value(frame.a_inv).real();
    std::vector<double> v(grid_size);
    for (int k = 0; k < grid_size; ++k) v[k] = F.value(std::polar(r, kTwoPi * k / grid_size)).real() - ref;
    MaxPrincipleResult out;
    out.grid_step = kTwoPi / grid_size;
    int arg = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    out.max_violation = v[arg];
    out.argmax_angle = kTwoPi * arg / grid_size;
    for (int k = 0; k < grid_size; ++k) {
        const double l = v[(k + grid_size - 1) % grid_size], rr = v[(k + 1) % grid_size];
        if (v[k] >= l && v[k] > rr) out.local_maxima.emplace_back(kTwoPi * k / grid_size, v[k]);
    }
    std::sort(out.local_maxima.begin(), out.local_maxima.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace edgelab
