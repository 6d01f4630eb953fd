#include "edgelab/predictors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "edgelab/errors.hpp"
#include "edgelab/kernel.hpp"

namespace edgelab {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int d) {
    double f = 1.0;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

}  // namespace

cplx cofactor_cn(double tau, int n, const Point& z, const Point& u) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double arg = 0.5 * tau * u.square_sum().imag() + sn * dot(z - tau * z.conj(), u).imag();
    return std::polar(1.0, arg);
}

NormalizedKernelSample normalized_kernel(const ModelParams& params, const EdgePoint& edge, const Point& u, const Point& v,
                                         const ContourConfig& config, double consistency_tol) {
    params.validate();
    require_dimension(edge.z, params.d, "normalized_kernel");
    require_dimension(u, params.d, "normalized_kernel");
    require_dimension(v, params.d, "normalized_kernel");
    const double sn = std::sqrt(static_cast<double>(params.n));
    const Point& z = edge.z;

    LogMagnitudePhase k = kernel_exact_log(params, sn * z + u, sn * z + v);
    const cplx gauss = params.d * std::log(kPi) + 0.5 * (u.norm2() + v.norm2()) - dot(u, v);
    const cplx cof = cofactor_cn(params.tau, params.n, z, u) * std::conj(cofactor_cn(params.tau, params.n, z, v));
    k.log_mag += gauss.real();
    k.phase *= std::polar(1.0, gauss.imag()) * cof;
    const cplx route_a = k.value();

    cplx route_b;
    if (params.tau == 0.0) {
        route_b = integral_I_zero(params, zeta_tau0(params.n, z, u, v), config).value;
    } else {
        const ZPair zp = zpm_map(params, z, u, v);
        route_b = integral_I_tau(params, saddle_frame(params, zp.plus, zp.minus), config).value;
    }

    NormalizedKernelSample s;
    s.route_a = route_a;
    s.route_b = route_b;
    s.L = route_b;
    const double scale = std::max({std::abs(route_a), std::abs(route_b), 1e-300});
    s.discrepancy = std::abs(route_a - route_b) / scale;
    s.z = edge;
    s.u = u;
    s.v = v;
    s.n = params.n;
    if (!(s.discrepancy <= consistency_tol)) {
        std::ostringstream msg;
        msg << "normalized_kernel: direct and contour routes differ by " << s.discrepancy << " (d=" << params.d
            << ", tau=" << params.tau << ", n=" << params.n << ")";
        throw ConsistencyError(msg.str());
    }
    return s;
}

cplx edge_kernel_prediction(const EdgePoint& edge, const Point& u, const Point& v) {
    const cplx x = (dot(u, edge.normal) + dot(edge.normal, v)) / std::numbers::sqrt2;
    return 0.5 * erfc_complex(x);
}

double edge_density_leading(int d, double lambda) {
    return factorial(d) / (2.0 * std::pow(kPi, d)) * erfc_complex(std::numbers::sqrt2 * lambda).real();
}

double edge_density_prediction(const ModelParams& params, const EdgePoint& edge, double lambda, int n, ExpansionForm form) {
    params.validate();
    const int d = params.d;
    const double tau = params.tau;
    const double kappa = edge.kappa;
    double extra = 0.0;
    if (tau != 0.0) {
        extra = form == ExpansionForm::Printed
                    ? (d - 1) / std::cbrt(2.0 * kappa * kappa)
                    : -3.0 * tau * tau * (d - 1) / (std::cbrt(kappa * kappa) * (1.0 - tau * tau));
    }
    const double second = kappa / std::sqrt(static_cast<double>(n)) * factorial(d) /
                          (3.0 * std::pow(kPi, d) * std::sqrt(2.0 * kPi)) * (lambda * lambda - 1.0 + extra) *
                          std::exp(-2.0 * lambda * lambda);
    return edge_density_leading(d, lambda) + second;
}

cplx bulk_prediction(int d, const Point& u, const Point& v) {
    return std::pow(kPi, -d) * std::exp(dot(u, v) - 0.5 * (u.norm2() + v.norm2()));
}

cplx d1_refined_prediction(const EdgePoint& edge, cplx u, cplx v, int n) {
    if (edge.z.size() != 1) throw UsageError("d1_refined_prediction: requires d = 1");
    if (!(edge.tau > 0.0 && edge.tau < 1.0)) throw DomainError("d1_refined_prediction: requires 0 < tau < 1");
    const cplx vb = std::conj(v);
    const double au2 = std::norm(u), av2 = std::norm(v);
    const cplx lead = std::exp(u * vb - 0.5 * (au2 + av2)) * erfc_complex((u + vb) / std::numbers::sqrt2) / (2.0 * kPi);
    const cplx corr = edge.kappa / std::sqrt(static_cast<double>(n)) * std::exp(-0.5 * (au2 + u * u + av2 + vb * vb)) *
                      (u * u + vb * vb - u * vb - 1.0) / (3.0 * std::sqrt(2.0 * kPi * kPi * kPi));
    return lead + corr;
}

double scaled_edge_density(const ModelParams& params, const EdgePoint& edge, double lambda) {
    const double sn = std::sqrt(static_cast<double>(params.n));
    const Point x = sn * edge.z + lambda * edge.normal;
    return std::pow(static_cast<double>(params.n), params.d) * rho1_density(params, x);
}

}  // namespace edgelab
