#include "edgelab/saddle_lab.hpp"

#include <cmath>
#include <numbers>

#include "edgelab/errors.hpp"

namespace edgelab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

cplx pick_branch(cplx root, cplx lead1, cplx lead2) {
    if (root == 0.0) return root;
    const cplx ref = std::abs(lead1) >= 1e-14 ? lead1 : lead2;
    if (ref == 0.0) throw DegenerateSaddle("phi_at_pole: branch of the conformal map is ambiguous");
    return std::abs(root - ref) <= std::abs(root + ref) ? root : -root;
}

// log(1 + x) - x
cplx log1p_minus_x(cplx x) {
    if (std::abs(x) > 0.25) return std::log(1.0 + x) - x;
    cplx term = x, sum = 0.0;
    for (int k = 2; k < 200; ++k) {
        term *= -x;
        const cplx c = term / static_cast<double>(k);
        sum += c;
        if (std::abs(c) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// 1/2 erfc(X) + c exp(-X^2), switching to erfcx when erfc(X) is far below exp(-X^2)
cplx erfc_plus_gaussian(cplx X, cplx c) {
    if (X.real() > 3.0) return std::exp(-X * X) * (0.5 * erfcx_complex(X) + c);
    return 0.5 * erfc_complex(X) + c * std::exp(-X * X);
}

}  // namespace

PoleIntegral<cplx> pole_gaussian_integral(int n, cplx p, double l1, double l2) {
    if (n < 1) throw DomainError("pole_gaussian_integral: n must be >= 1");
    require_finite(p, "pole_gaussian_integral");
    return pole_gaussian_integral_t<double, cplx>(n, p, l1, l2, [](cplx w) { return erfcx_complex(w); });
}

PhiExpansion phi_at_pole(const ModelParams& params, const SaddleFrame& frame) {
    params.validate();
    if (!(params.tau > 0.0)) throw UsageError("phi_at_pole: requires tau > 0 (use phi_at_pole_zero)");
    const PhaseFunction F = frame.phase();
    const cplx s0 = frame.a_inv;
    const cplx t = params.tau - s0;
    const cplx f2 = F.d2(s0);
    const cplx c = -cplx(0.0, 1.0) * std::sqrt(0.5 * f2);
    const cplx lead1 = c * t;
    const cplx lead2 = lead1 + c * F.d3(s0) / (6.0 * f2) * t * t;
    const cplx root = std::sqrt(F.minus_pole(s0));
    PhiExpansion out;
    out.phi_at_pole = pick_branch(root, lead1, lead2);
    out.leading_coeff = lead1;
    return out;
}

PhiExpansion phi_at_pole_zero(cplx zeta) {
    require_finite(zeta, "phi_at_pole_zero");
    if (zeta == 0.0) throw DomainError("phi_at_pole_zero: no saddle point at zeta = 0");
    const cplx s0 = 1.0 / zeta;
    const cplx t = 1.0 - s0;
    const cplx f2 = zeta * zeta;
    const cplx c = -cplx(0.0, 1.0) * std::sqrt(0.5 * f2);
    const cplx f3 = -2.0 * zeta * zeta * zeta;
    const cplx lead1 = c * t;
    const cplx lead2 = lead1 + c * f3 / (6.0 * f2) * t * t;
    // F(s0) - F(1) = 1 + log(zeta) - zeta
    const cplx diff = log1p_minus_x(zeta - 1.0);
    PhiExpansion out;
    out.phi_at_pole = pick_branch(std::sqrt(diff), lead1, lead2);
    out.leading_coeff = lead1;
    return out;
}

cplx phi_lemma_tau0(cplx delta) { return delta / kSqrt2 - delta * delta / (3.0 * kSqrt2); }

cplx phi_lemma_tau(const EdgePoint& edge, DeltaPair d) {
    const double g = edge_g(edge.tau, edge.eta);
    const cplx s = d.plus + d.minus;
    return s / g - g * (d.plus * d.plus - d.plus * d.minus + d.minus * d.minus) / 6.0;
}

double phi_normal_specialization(double tau, double eta, double lambda, int n, ExpansionForm form) {
    const double sn = std::sqrt(static_cast<double>(n));
    if (tau == 0.0) return kSqrt2 * lambda - lambda * lambda / (3.0 * kSqrt2 * sn);
    const double g = edge_g(tau, eta);
    const double g3 = g * g * g;
    if (form == ExpansionForm::Printed) return kSqrt2 * lambda + g3 * lambda * lambda / (6.0 * sn);
    return kSqrt2 * lambda - g3 * lambda * lambda / (12.0 * sn);
}

cplx asymptotic_I_zero(int n, cplx delta) {
    require_finite(delta, "asymptotic_I_zero");
    const double sn = std::sqrt(static_cast<double>(n));
    const cplx X = sn * delta / kSqrt2;
    const cplx c = (static_cast<double>(n) * delta * delta - 1.0) / (3.0 * std::sqrt(2.0 * kPi * n));
    return erfc_plus_gaussian(X, c);
}

cplx asymptotic_I_tau(const ModelParams& params, const EdgePoint& edge, DeltaPair d, ExpansionForm form) {
    params.validate();
    if (!(params.tau > 0.0)) throw UsageError("asymptotic_I_tau: requires tau > 0");
    const double n = params.n;
    const double tau = params.tau;
    const double g = edge_g(tau, edge.eta);
    const cplx X = std::sqrt(n) * (d.plus + d.minus) / g;
    const cplx bracket = n * (d.plus * d.plus - d.plus * d.minus + d.minus * d.minus) / 3.0 - g * g / 6.0 -
                         tau * tau * (params.d - 1) / (1.0 - tau * tau);
    const double pref = (form == ExpansionForm::Printed ? 1.0 : 0.5) * g / std::sqrt(kPi * n);
    return erfc_plus_gaussian(X, pref * bracket);
}

}  // namespace edgelab
