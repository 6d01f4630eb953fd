#include "edgelab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgelab/errors.hpp"

namespace edgelab {

namespace {

constexpr double kRescale = 1e100;

void check_tau(double tau) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("tau must lie in [0,1)");
}

LogMagnitudePhase shifted(cplx p, double log_scale) {
    auto r = LogMagnitudePhase::from_value(p);
    if (!r.is_zero()) r.log_mag += log_scale;
    return r;
}

// Orthonormal polynomials without weight: x^j/sqrt(j!) at tau = 0, scaled Hermite otherwise.
std::vector<LogMagnitudePhase> basis_sequence(cplx x, double tau, int n) {
    std::vector<LogMagnitudePhase> out(n);
    out[0] = {0.0, cplx(1.0, 0.0)};
    if (n == 1) return out;
    double scale = 0.0;
    if (tau == 0.0) {
        cplx p = 1.0;
        for (int j = 0; j + 1 < n; ++j) {
            p *= x / std::sqrt(static_cast<double>(j + 1));
            if (std::abs(p) > kRescale) {
                scale += std::log(std::abs(p));
                p /= std::abs(p);
            }
            out[j + 1] = shifted(p, scale);
        }
        return out;
    }
    const cplx y = std::sqrt((1.0 - tau * tau) / (2.0 * tau)) * x;
    cplx prev = 1.0;
    cplx cur = y * std::sqrt(2.0 * tau);
    out[1] = shifted(cur, 0.0);
    for (int j = 1; j + 1 < n; ++j) {
        const double jd = j;
        cplx next = y * std::sqrt(2.0 * tau / (jd + 1.0)) * cur - tau * std::sqrt(jd / (jd + 1.0)) * prev;
        prev = cur;
        cur = next;
        const double m = std::max(std::abs(cur), std::abs(prev));
        if (m > kRescale) {
            scale += std::log(m);
            cur /= m;
            prev /= m;
        }
        out[j + 1] = shifted(cur, scale);
    }
    return out;
}

struct Scaled {
    std::vector<cplx> values;
    double log_scale = 0.0;
};

// T[j] = sqrt(w(z) w(w)) phi_j(z) conj(phi_j(w)), stored as exp(log_scale) * values[j]
Scaled coordinate_terms(cplx z, cplx w, double tau, int n) {
    const auto a = basis_sequence(z, tau, n);
    const auto b = basis_sequence(w, tau, n);
    const double lw = 0.5 * (log_weight_omega(z, tau) + log_weight_omega(w, tau));
    std::vector<LogMagnitudePhase> t(n);
    double top = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        t[j] = a[j] * conj(b[j]);
        if (!t[j].is_zero()) t[j].log_mag += lw;
        top = std::max(top, t[j].log_mag);
    }
    Scaled s;
    s.log_scale = top;
    s.values.resize(n);
    for (int j = 0; j < n; ++j) {
        s.values[j] = t[j].is_zero() ? cplx(0.0) : std::exp(t[j].log_mag - top) * t[j].phase;
    }
    return s;
}

}  // namespace

double log_weight_omega(cplx zeta, double tau) {
    check_tau(tau);
    return -std::norm(zeta) + tau * (zeta * zeta).real();
}

double weight_omega(cplx zeta, double tau) {
    require_finite(zeta, "weight_omega");
    return std::exp(log_weight_omega(zeta, tau));
}

std::vector<LogMagnitudePhase> phi_sequence(cplx x, double tau, int n) {
    check_tau(tau);
    if (tau == 0.0) throw UsageError("phi_sequence: tau = 0 uses the monomial basis (kernel_tau0_closed path)");
    if (n < 1) throw DomainError("phi_sequence: n must be >= 1");
    require_finite(x, "phi_sequence");
    return basis_sequence(x, tau, n);
}

LogMagnitudePhase kernel_exact_log(const ModelParams& params, const Point& z, const Point& w) {
    params.validate();
    require_dimension(z, params.d, "kernel_exact");
    require_dimension(w, params.d, "kernel_exact");
    const int n = params.n;
    std::vector<cplx> acc;
    double log_scale = 0.0;
    for (int k = 0; k < params.d; ++k) {
        Scaled t = coordinate_terms(z[k], w[k], params.tau, n);
        if (!std::isfinite(t.log_scale)) return LogMagnitudePhase::zero();
        log_scale += t.log_scale;
        if (k == 0) {
            acc = std::move(t.values);
            continue;
        }
        std::vector<cplx> next(n, cplx(0.0));
        for (int i = 0; i < n; ++i) {
            if (acc[i] == 0.0) continue;
            for (int j = 0; i + j < n; ++j) next[i + j] += acc[i] * t.values[j];
        }
        acc = std::move(next);
    }
    CompensatedSum total;
    for (const auto& a : acc) total.add(a);
    auto r = LogMagnitudePhase::from_value(total.result());
    if (r.is_zero()) return r;
    r.log_mag += log_scale + params.d * std::log(std::sqrt(1.0 - params.tau * params.tau) / std::numbers::pi);
    return r;
}

cplx kernel_exact(const ModelParams& params, const Point& z, const Point& w) {
    return kernel_exact_log(params, z, w).value();
}

cplx kernel_tau0_closed(const ModelParams& params, const Point& z, const Point& w) {
    params.validate();
    if (params.tau != 0.0) throw UsageError("kernel_tau0_closed: requires tau = 0");
    require_dimension(z, params.d, "kernel_tau0_closed");
    require_dimension(w, params.d, "kernel_tau0_closed");
    const double base = -0.5 * (z.norm2() + w.norm2()) - params.d * std::log(std::numbers::pi);
    const cplx zeta = dot(z, w);
    if (zeta == 0.0) return std::exp(base);
    const double lz = std::log(std::abs(zeta));
    const double az = std::arg(zeta);
    std::vector<LogMagnitudePhase> terms(params.n);
    for (int j = 0; j < params.n; ++j) {
        terms[j] = {base + j * lz - std::lgamma(j + 1.0), std::polar(1.0, j * az)};
    }
    return stable_sum(terms).value();
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

double rho1_density(const ModelParams& params, const Point& z) {
    const double k = kernel_exact(params, z, z).real();
    return std::max(k, 0.0) / binomial(params.n + params.d - 1, params.d);
}

cplx determinant(std::vector<cplx> a, int m) {
    cplx det = 1.0;
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r) {
            if (std::abs(a[r * m + c]) > std::abs(a[piv * m + c])) piv = r;
        }
        if (a[piv * m + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < m; ++j) std::swap(a[c * m + j], a[piv * m + j]);
            det = -det;
        }
        const cplx p = a[c * m + c];
        det *= p;
        for (int r = c + 1; r < m; ++r) {
            const cplx f = a[r * m + c] / p;
            for (int j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
        }
    }
    return det;
}

double correlation_k(const ModelParams& params, std::span<const Point> pts) {
    const int k = static_cast<int>(pts.size());
    if (k < 1 || k > 6) throw UsageError("correlation_k: 1 <= k <= 6 required");
    std::vector<cplx> m(k * k);
    double hadamard = 1.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            m[i * k + j] = (j < i) ? std::conj(m[j * k + i]) : kernel_exact(params, pts[i], pts[j]);
        }
        m[i * k + i] = m[i * k + i].real();
        hadamard *= m[i * k + i].real();
    }
    const cplx det = determinant(m, k);
    if (std::abs(det.imag()) > 1e-10 * std::max(hadamard, 1e-300) && std::abs(det.imag()) > 1e-300) {
        throw ConsistencyError("correlation_k: determinant has non-negligible imaginary part");
    }
    return std::max(det.real(), 0.0);
}

}  // namespace edgelab
