#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"

namespace edgelab {

enum class DropletRegion { Inside, Edge, Outside };

// (1-tau)/(1+tau) |Re z|^2 + (1+tau)/(1-tau) |Im z|^2
double droplet_form(double tau, const Point& z);
DropletRegion droplet_classify(const ModelParams& params, const Point& z, double tol = 1e-9);

struct EdgePoint {
    Point z;
    Point normal;
    double kappa = 1.0;
    double eta = 0.0;
    double tau = 0.0;
};

EdgePoint edge_point_from(double tau, const std::vector<double>& p, const std::vector<double>& q, double theta);
EdgePoint edge_point_sample(const ModelParams& params, std::uint64_t direction_seed);
EdgePoint make_edge_point(double tau, const Point& z, double tol = 1e-9);

Point outward_normal(double tau, const Point& z, double tol = 1e-9);
double curvature_kappa(double tau, const Point& z);

struct EllipticCoords {
    double xi = 0.0;
    double eta = 0.0;
};

// sqrt(2) cosh(xi + i eta) = zeta, xi >= 0, eta in (-pi, pi], eta in [0, pi] when xi = 0
EllipticCoords elliptic_coords(cplx zeta);

double xi_edge(double tau);
double sinh_2xi(double tau);
// sqrt(sinh 2 xi_tau) / |sinh(xi_tau + i eta)|
double edge_g(double tau, double eta);

struct ZPair {
    cplx plus;
    cplx minus;
};

ZPair edge_zhat(double tau, double eta);
// z_pm for a pair of scaled points x, y (the kernel argument pair divided by sqrt(n))
ZPair zpm_pair(double tau, const Point& x, const Point& y, bool flip_sum = false, bool flip_diff = false);
ZPair zpm_map(const ModelParams& params, const Point& z, const Point& u, const Point& v,
              bool flip_sum = false, bool flip_diff = false);
// Representative of the branch class of z_pm closest to (zhat_+, zhat_-).
ZPair align_to_edge(ZPair z_pm, const EdgePoint& edge);

struct DeltaPair {
    cplx plus;
    cplx minus;
};

DeltaPair delta_pm(ZPair z_pm, const EdgePoint& edge);
ZPair reconstruct_zpm(DeltaPair delta, const EdgePoint& edge);

// tau = 0 analogue: zeta = (z + u/sqrt(n)).(z + v/sqrt(n))
cplx zeta_tau0(int n, const Point& z, const Point& u, const Point& v);

// F(s) = s/(1+s) P/2 - s/(1-s) Q/2 - log s + log tau with P = (z_+ + z_-)^2, Q = (z_+ - z_-)^2
struct PhaseFunction {
    cplx P;
    cplx Q;
    double tau;

    cplx value(cplx s) const;
    cplx d1(cplx s) const;
    cplx d2(cplx s) const;
    cplx d3(cplx s) const;
    // F(s) - F(tau), evaluated without cancellation near s = tau
    cplx minus_pole(cplx s) const;
};

struct SaddleFrame {
    cplx a, a_inv, b, b_inv;
    cplx F_at_a_inv;
    cplx F2_at_a_inv;
    cplx z_plus, z_minus;
    double tau = 0.0;
    // |F'| at a, a_inv, b, b_inv
    std::array<double, 4> residuals{};
    // elliptic coordinates of z_+ and z_-
    EllipticCoords w_plus, w_minus;

    PhaseFunction phase() const { return {(z_plus + z_minus) * (z_plus + z_minus), (z_plus - z_minus) * (z_plus - z_minus), tau}; }
};

SaddleFrame saddle_frame(const ModelParams& params, cplx z_plus, cplx z_minus);

// 2 a^2 sinh(w_+) sinh(w_-) / sinh(w_+ + w_-)
cplx F2_elliptic(const SaddleFrame& frame);

}  // namespace edgelab
