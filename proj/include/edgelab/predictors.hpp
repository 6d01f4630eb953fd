#pragma once

#include "edgelab/contour.hpp"
#include "edgelab/droplet.hpp"
#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"
#include "edgelab/saddle_lab.hpp"

namespace edgelab {

cplx cofactor_cn(double tau, int n, const Point& z, const Point& u);

struct NormalizedKernelSample {
    cplx L;
    cplx route_a;
    cplx route_b;
    double discrepancy = 0.0;
    EdgePoint z;
    Point u, v;
    int n = 0;
};

NormalizedKernelSample normalized_kernel(const ModelParams& params, const EdgePoint& edge, const Point& u, const Point& v,
                                         const ContourConfig& config = {}, double consistency_tol = 1e-6);

cplx edge_kernel_prediction(const EdgePoint& edge, const Point& u, const Point& v);
double edge_density_prediction(const ModelParams& params, const EdgePoint& edge, double lambda, int n,
                               ExpansionForm form = ExpansionForm::Printed);
// d!/(2 pi^d) erfc(sqrt(2) lambda)
double edge_density_leading(int d, double lambda);
cplx bulk_prediction(int d, const Point& u, const Point& v);
cplx d1_refined_prediction(const EdgePoint& edge, cplx u, cplx v, int n);

// n^d rho_1(sqrt(n) z + lambda normal)
double scaled_edge_density(const ModelParams& params, const EdgePoint& edge, double lambda);

}  // namespace edgelab
