#include <doctest.h>

#include "edgelab/errors.hpp"
#include "edgelab/harness.hpp"
#include "edgelab/quadrature.hpp"
#include "edgelab/saddle_lab.hpp"
#include "test_util.hpp"

using namespace edgelab;
using testutil::rel_err;

namespace {

// Composite Gauss-Legendre along the real segment [l1, l2]
cplx straight_integral(int n, cplx p, double l1, double l2) {
    const auto r = gauss_legendre<double>(20);
    const int panels = 400;
    cplx s = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = l1 + (l2 - l1) * k / panels, b = l1 + (l2 - l1) * (k + 1) / panels;
        for (int i = 0; i < 20; ++i) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * r.nodes[i];
            s += 0.5 * (b - a) * r.weights[i] * std::exp(-n * t * t) / (t - p);
        }
    }
    return s;
}

double slope(const std::vector<int>& ns, const std::vector<double>& err) {
    std::vector<std::pair<int, double>> s;
    for (std::size_t i = 0; i < ns.size(); ++i) s.emplace_back(ns[i], err[i]);
    return fit_convergence_rate(s);
}

}  // namespace

TEST_CASE("pole Gaussian integral in extended precision") {
    const auto a = pole_gaussian_integral_mp(50, cplx(0.0, -0.4), -1.0, 1.0);
    CHECK(a.abs_difference <= a.envelope);
    CHECK(a.envelope == doctest::Approx(10.0 * 2.0 * std::exp(-50.0) / 50.0).epsilon(1e-12));
    const auto b = pole_gaussian_integral_mp(200, cplx(0.2, -0.3), -1.0, 1.0);
    CHECK(b.abs_difference <= b.envelope);
    const auto c = pole_gaussian_integral_mp(30, cplx(-0.3, 0.1), -1.0, 1.0);
    CHECK(c.abs_difference <= c.envelope);
}

TEST_CASE("pole Gaussian integral in double precision") {
    CounterRng rng(51);
    for (int i = 0; i < 20; ++i) {
        const int n = 10 + static_cast<int>(rng.uniform() * 200);
        const cplx p(rng.uniform(-0.6, 0.6), rng.uniform(-0.5, 0.5));
        const auto r = pole_gaussian_integral(n, p, -1.0, 1.0);
        const double env = 10.0 * 2.0 * std::exp(-static_cast<double>(n)) / n;
        // largest |exp(-n t^2)| met on the detour above p
        const double h = std::max(p.imag(), 0.0) + std::min(0.25, 1.0 / std::sqrt(static_cast<double>(n)));
        const double scale = std::max(std::abs(r.rhs), std::exp(n * h * h));
        CHECK_MESSAGE(std::abs(r.lhs - r.rhs) <= env + 1e-14 * scale, "n=" << n << " p=" << p);
    }
    // moving the path to the other side of the pole adds the full residue
    for (cplx p : {cplx(0.1, 0.2), cplx(-0.3, 0.15)}) {
        const int n = 40;
        const auto r = pole_gaussian_integral(n, p, -1.0, 1.0);
        const cplx flipped = straight_integral(n, p, -1.0, 1.0);
        const cplx res = 2.0 * M_PI * cplx(0.0, 1.0) * std::exp(-static_cast<double>(n) * p * p);
        CHECK(std::abs(flipped - r.lhs - res) <= 1e-12 * std::abs(res));
    }
    CHECK_THROWS_AS(pole_gaussian_integral(20, cplx(0.995, -0.1), -1.0, 1.0), DomainError);
}

TEST_CASE("phi at the pole") {
    const ModelParams p{1, 0.5, 64};
    const EdgePoint e = edge_point_sample(p, 2);
    const ZPair h = edge_zhat(0.5, e.eta);
    const SaddleFrame f0 = saddle_frame(p, h.plus, h.minus);
    CHECK(std::abs(phi_at_pole(p, f0).phi_at_pole) <= 1e-7);

    CounterRng rng(52);
    for (int i = 0; i < 30; ++i) {
        const ModelParams q{1 + i % 3, 0.2 + 0.6 * rng.uniform(), 400};
        const EdgePoint eq = edge_point_sample(q, 40 + i);
        const Point u = testutil::random_point(rng, q.d, 0.8), v = testutil::random_point(rng, q.d, 0.8);
        const ZPair z = zpm_map(q, eq.z, u, v);
        const SaddleFrame f = saddle_frame(q, z.plus, z.minus);
        const auto ph = phi_at_pole(q, f);
        const PhaseFunction F = f.phase();
        CHECK(std::abs(-ph.phi_at_pole * ph.phi_at_pole - (F.value(q.tau) - F.value(f.a_inv))) <= 1e-12);
        CHECK(std::abs(ph.phi_at_pole - ph.leading_coeff) <= 0.5 * std::abs(ph.leading_coeff));
    }
    CHECK_THROWS_AS(phi_at_pole({1, 0.0, 4}, f0), UsageError);
    CHECK_THROWS_AS(phi_at_pole_zero(0.0), DomainError);
    CHECK(std::abs(phi_at_pole_zero(1.0).phi_at_pole) <= 1e-15);
}

TEST_CASE("conformal map expansions") {
    const std::vector<int> ns = {100, 1000, 10000};
    const Point u{cplx(0.3, 0.2), cplx(-0.1, 0.25)}, v{cplx(0.0, -0.2), cplx(0.15, 0.1)};
    std::vector<double> r0, rt;
    for (int n : ns) {
        const ModelParams p0{2, 0.0, n};
        const EdgePoint e0 = edge_point_sample(p0, 7);
        const cplx zeta = zeta_tau0(n, e0.z, u, v);
        r0.push_back(std::abs(cplx(0.0, 1.0) * phi_at_pole_zero(zeta).phi_at_pole - phi_lemma_tau0(zeta - 1.0)));
        const ModelParams pt{2, 0.5, n};
        const EdgePoint et = edge_point_sample(pt, 7);
        const ZPair z = zpm_map(pt, et.z, u, v);
        const SaddleFrame f = saddle_frame(pt, z.plus, z.minus);
        const cplx iphi = cplx(0.0, 1.0) * phi_at_pole(pt, f).phi_at_pole;
        rt.push_back(std::abs(iphi - phi_lemma_tau(et, delta_pm(align_to_edge(z, et), et))));
    }
    CHECK(slope(ns, r0) <= -1.2);
    CHECK(slope(ns, rt) <= -1.2);
}

TEST_CASE("normal specialization of the conformal map") {
    CHECK(phi_normal_specialization(0.0, 0.0, 0.5, 100, ExpansionForm::Printed) ==
          doctest::Approx(std::sqrt(2.0) * 0.5 - 0.25 / (3.0 * std::sqrt(2.0) * 10.0)).epsilon(1e-15));
    const double g = edge_g(0.5, 0.3);
    CHECK(phi_normal_specialization(0.5, 0.3, 1.0, 100, ExpansionForm::Printed) ==
          doctest::Approx(std::sqrt(2.0) + g * g * g / 60.0).epsilon(1e-15));
    CHECK(phi_normal_specialization(0.5, 0.3, 1.0, 100, ExpansionForm::Rederived) ==
          doctest::Approx(std::sqrt(2.0) - g * g * g / 120.0).epsilon(1e-15));
}

TEST_CASE("asymptotic I formulas") {
    for (int n : {16, 256}) {
        CHECK(rel_err(asymptotic_I_zero(n, 0.0), 0.5 - 1.0 / (3.0 * std::sqrt(2.0 * M_PI * n))) <= 1e-14);
    }
    const double tau = 0.5;
    const EdgePoint e = edge_point_sample({1, tau, 4}, 1);
    const double g = edge_g(tau, e.eta);
    const ModelParams p{1, tau, 100};
    CHECK(rel_err(asymptotic_I_tau(p, e, {0.0, 0.0}, ExpansionForm::Printed), 0.5 - g * g * g / (6.0 * std::sqrt(M_PI * 100.0))) <=
          1e-14);
    CHECK(rel_err(asymptotic_I_tau(p, e, {0.0, 0.0}, ExpansionForm::Rederived), 0.5 - g * g * g / (12.0 * std::sqrt(M_PI * 100.0))) <=
          1e-14);
    // large erfc argument stays finite
    CHECK(std::isfinite(std::abs(asymptotic_I_zero(4096, cplx(-0.5, 0.1)))));
}

TEST_CASE("asymptotic I against the contour integral") {
    const Point u{cplx(0.3, 0.2)}, v{cplx(0.0, -0.2)};
    auto err_tau = [&](int n) {
        const ModelParams p{1, 0.5, n};
        const EdgePoint e = edge_point_sample(p, 21);
        const ZPair z = zpm_map(p, e.z, u, v);
        const cplx N = integral_I_tau(p, saddle_frame(p, z.plus, z.minus)).value;
        return std::abs(N - asymptotic_I_tau(p, e, delta_pm(align_to_edge(z, e), e), ExpansionForm::Rederived));
    };
    auto err_zero = [&](int n) {
        const ModelParams p{1, 0.0, n};
        const EdgePoint e = edge_point_sample(p, 21);
        const cplx zeta = zeta_tau0(n, e.z, u, v);
        return std::abs(integral_I_zero(p, zeta).value - asymptotic_I_zero(n, zeta - 1.0));
    };
    for (int n : {256, 1024}) {
        const double rt = err_tau(4 * n) / err_tau(n);
        const double r0 = err_zero(4 * n) / err_zero(n);
        CAPTURE(n);
        CHECK(rt >= 0.15);
        CHECK(rt <= 0.45);
        CHECK(r0 >= 0.15);
        CHECK(r0 <= 0.45);
    }
}
