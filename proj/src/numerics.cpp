#include "edgelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgelab/errors.hpp"

namespace edgelab {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;

void neumaier(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
        c += (s - t) + x;
    } else {
        c += (x - t) + s;
    }
    s = t;
}

// erf(z) by its Maclaurin series
cplx erf_maclaurin(cplx z) {
    const cplx mz2 = -z * z;
    const double az2 = std::abs(z) * std::abs(z);
    cplx term = z;
    CompensatedSum sum;
    sum.add(term);
    for (int k = 1; k < 2000; ++k) {
        term *= mz2 / static_cast<double>(k);
        const cplx contrib = term / static_cast<double>(2 * k + 1);
        sum.add(contrib);
        if (k > az2 && std::abs(contrib) < 1e-18 * std::abs(sum.result())) break;
    }
    return 2.0 * kInvSqrtPi * sum.result();
}

// erfcx(z) for Re z > 0 from Laplace's continued fraction, modified Lentz
cplx erfcx_cf(cplx z) {
    const double tiny = 1e-300;
    cplx f = z;
    cplx C = f, D = 0.0;
    for (int k = 1; k < 20000; ++k) {
        const double a = 0.5 * k;
        D = z + a * D;
        if (D == 0.0) D = tiny;
        C = z + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const cplx delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return kInvSqrtPi / f;
}

bool use_maclaurin(cplx z) {
    return z.real() < 1.5 && std::abs(z) < 6.0;
}

}  // namespace

LogMagnitudePhase LogMagnitudePhase::from_value(cplx v) {
    const double m = std::abs(v);
    if (m == 0.0) return zero();
    return {std::log(m), v / m};
}

LogMagnitudePhase LogMagnitudePhase::from_log(cplx log_value) {
    return {log_value.real(), std::polar(1.0, log_value.imag())};
}

LogMagnitudePhase LogMagnitudePhase::zero() {
    return {-std::numeric_limits<double>::infinity(), cplx(1.0, 0.0)};
}

cplx LogMagnitudePhase::value() const {
    if (is_zero()) return 0.0;
    return std::exp(log_mag) * phase;
}

bool LogMagnitudePhase::is_zero() const {
    return log_mag == -std::numeric_limits<double>::infinity();
}

LogMagnitudePhase operator*(const LogMagnitudePhase& a, const LogMagnitudePhase& b) {
    if (a.is_zero() || b.is_zero()) return LogMagnitudePhase::zero();
    cplx ph = a.phase * b.phase;
    return {a.log_mag + b.log_mag, ph / std::abs(ph)};
}

LogMagnitudePhase conj(const LogMagnitudePhase& a) {
    return {a.log_mag, std::conj(a.phase)};
}

void require_finite(cplx z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError(std::string(what) + ": non-finite argument");
    }
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

void CompensatedSum::add(cplx x) {
    neumaier(re_, re_c_, x.real());
    neumaier(im_, im_c_, x.imag());
}

cplx erfc_complex(cplx z) {
    require_finite(z, "erfc_complex");
    if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
    if (use_maclaurin(z)) return 1.0 - erf_maclaurin(z);
    return std::exp(-z * z) * erfcx_cf(z);
}

cplx erfcx_complex(cplx z) {
    require_finite(z, "erfcx_complex");
    if (z.real() < 0.0) return 2.0 * std::exp(z * z) - erfcx_complex(-z);
    if (use_maclaurin(z)) return std::exp(z * z) * (1.0 - erf_maclaurin(z));
    return erfcx_cf(z);
}

LogMagnitudePhase stable_sum(std::span<const LogMagnitudePhase> terms) {
    if (terms.empty()) throw UsageError("stable_sum: empty sequence");
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) top = std::max(top, t.log_mag);
    if (top == -std::numeric_limits<double>::infinity()) return LogMagnitudePhase::zero();
    if (!std::isfinite(top)) throw DomainError("stable_sum: infinite term");
    CompensatedSum acc;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        acc.add(std::exp(t.log_mag - top) * t.phase);
    }
    const cplx s = acc.result();
    const double m = std::abs(s);
    if (m == 0.0) return LogMagnitudePhase::zero();
    return {top + std::log(m), s / m};
}

}  // namespace edgelab
