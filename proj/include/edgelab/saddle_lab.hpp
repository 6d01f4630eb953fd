#pragma once

#include "edgelab/droplet.hpp"
#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"
#include "edgelab/pole_integral.hpp"

namespace edgelab {

// Printed: formula exactly as stated. Rederived: constants recomputed from the contour chain.
enum class ExpansionForm { Printed, Rederived };

enum class PhiMethod { SeriesBranch, LemmaExpansion };

struct PhiExpansion {
    cplx phi_at_pole;
    cplx leading_coeff;
    PhiMethod method = PhiMethod::SeriesBranch;
};

PoleIntegral<cplx> pole_gaussian_integral(int n, cplx p, double l1, double l2);

// phi(tau) with F(s) - F(a_inv) = -phi(s)^2, branch fixed by the leading term
PhiExpansion phi_at_pole(const ModelParams& params, const SaddleFrame& frame);
// phi(1) for F(s) = zeta s - log s around s0 = 1/zeta
PhiExpansion phi_at_pole_zero(cplx zeta);

// Expansions of i phi(pole)
cplx phi_lemma_tau0(cplx delta);
cplx phi_lemma_tau(const EdgePoint& edge, DeltaPair delta);
// i sqrt(n) phi(pole) for u = v = lambda * normal
double phi_normal_specialization(double tau, double eta, double lambda, int n, ExpansionForm form);

cplx asymptotic_I_zero(int n, cplx delta);
cplx asymptotic_I_tau(const ModelParams& params, const EdgePoint& edge, DeltaPair delta,
                      ExpansionForm form = ExpansionForm::Printed);

}  // namespace edgelab

namespace edgelab {

struct PoleIntegralCheck {
    cplx lhs;
    cplx rhs;
    // |lhs - rhs| evaluated in the working precision (below double resolution of lhs)
    double abs_difference = 0.0;
    // 10 (exp(-n l1^2) + exp(-n l2^2)) / n
    double envelope = 0.0;
};

// Same computation carried out in ~130-digit binary floating point.
PoleIntegralCheck pole_gaussian_integral_mp(int n, cplx p, double l1, double l2);

}  // namespace edgelab
