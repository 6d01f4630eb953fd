#pragma once

#include <utility>
#include <vector>

#include "edgelab/droplet.hpp"
#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"

namespace edgelab {

enum class PoleSide { Auto, Enclose, Exclude };

struct ContourConfig {
    int node_count = 512;
    // minimal pole clearance, in units of min(tau, 1 - tau)/(2 sqrt n) (tau > 0) or 1/(2 sqrt n) (tau = 0)
    double radius_offset = 1.0;
    double tolerance = 1e-12;
    int max_doublings = 8;
    PoleSide pole_side = PoleSide::Auto;

    void validate() const;
};

struct ContourResult {
    // pole-normalized value N = circle + residue
    cplx value;
    LogMagnitudePhase normalized;
    // trapezoid value of the circle integral alone
    LogMagnitudePhase circle;
    double residue = 0.0;
    double radius = 0.0;
    int nodes = 0;
    // |value(M) - value(M/2)| / |value(M)| at acceptance
    double convergence = 0.0;
};

ContourResult integral_I_tau(const ModelParams& params, const SaddleFrame& frame, const ContourConfig& config = {});
ContourResult integral_I_zero(const ModelParams& params, cplx zeta, const ContourConfig& config = {});

// K_n(Z, W) through the single-integral representation
LogMagnitudePhase kernel_contour_log(const ModelParams& params, const Point& Z, const Point& W, const ContourConfig& config = {});
cplx kernel_contour(const ModelParams& params, const Point& Z, const Point& W, const ContourConfig& config = {});

struct MaxPrincipleResult {
    double max_violation = 0.0;
    double argmax_angle = 0.0;
    double grid_step = 0.0;
    // (angle, Re F - Re F(a_inv)) of grid local maxima, largest first
    std::vector<std::pair<double, double>> local_maxima;
};

MaxPrincipleResult max_principle_check(const SaddleFrame& frame, int grid_size);

}  // namespace edgelab
