#pragma once

#include <span>
#include <vector>

#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"

namespace edgelab {

double weight_omega(cplx zeta, double tau);
// log of weight_omega
double log_weight_omega(cplx zeta, double tau);

std::vector<LogMagnitudePhase> phi_sequence(cplx x, double tau, int n);

cplx kernel_exact(const ModelParams& params, const Point& z, const Point& w);
LogMagnitudePhase kernel_exact_log(const ModelParams& params, const Point& z, const Point& w);

cplx kernel_tau0_closed(const ModelParams& params, const Point& z, const Point& w);

double binomial(int n, int k);
double rho1_density(const ModelParams& params, const Point& z);

// Unnormalized determinant det(K_n(p_i, p_j)).
double correlation_k(const ModelParams& params, std::span<const Point> pts);

// Determinant of a small complex matrix (row-major, size m*m) by partial-pivot LU.
cplx determinant(std::vector<cplx> a, int m);

}  // namespace edgelab
