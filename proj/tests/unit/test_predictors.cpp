#include <doctest.h>

#include "edgelab/errors.hpp"
#include "edgelab/kernel.hpp"
#include "edgelab/predictors.hpp"
#include "test_util.hpp"

using namespace edgelab;
using testutil::rel_err;

TEST_CASE("cofactors") {
    CounterRng rng(61);
    for (int i = 0; i < 50; ++i) {
        const int d = 1 + i % 3;
        const double tau = 0.2 * (i % 5);
        const int n = 16 << (i % 4);
        const Point z = edge_point_sample({d, tau, n}, i).z;
        const Point u = testutil::random_point(rng, d, 1.0);
        CHECK(std::abs(std::abs(cofactor_cn(tau, n, z, u)) - 1.0) <= 1e-15);
        CHECK(cofactor_cn(tau, n, z, Point(d)) == cplx(1.0, 0.0));
        const cplx expected =
            std::polar(1.0, 0.5 * tau * u.square_sum().imag() + std::sqrt(static_cast<double>(n)) * dot(z - tau * z.conj(), u).imag());
        CHECK(std::abs(cofactor_cn(tau, n, z, u) - expected) <= 1e-14);
    }
}

TEST_CASE("normalized kernel") {
    for (double tau : {0.0, 0.5}) {
        for (int d = 1; d <= 3; ++d) {
            const ModelParams p{d, tau, 1024};
            const EdgePoint e = edge_point_sample(p, 70 + d);
            const auto s = normalized_kernel(p, e, Point(d), Point(d));
            CHECK(std::abs(s.L.imag()) <= 1e-12);
            CHECK(std::abs(s.L.real() - 0.5) <= 0.05);
            CHECK(s.discrepancy <= 1e-9);
        }
    }
    // Ginibre edge law by the explicit partial sum
    const int n = 400;
    const ModelParams g{1, 0.0, n};
    const EdgePoint e = edge_point_sample(g, 5);
    const Point u{cplx(0.4, -0.1)}, v{cplx(-0.2, 0.3)};
    const auto s = normalized_kernel(g, e, u, v);
    const cplx a = 20.0 * e.z[0] + u[0], b = 20.0 * e.z[0] + v[0];
    // e^{-(|a|^2+|b|^2)/2} sum_{j<n} (a conj b)^j / j!  in log form
    const cplx w = a * std::conj(b);
    std::vector<LogMagnitudePhase> terms;
    for (int j = 0; j < n; ++j) {
        terms.push_back(LogMagnitudePhase::from_log(static_cast<double>(j) * std::log(w) - std::lgamma(j + 1.0)));
    }
    const auto sum = stable_sum(terms);
    const cplx logk = std::log(sum.phase) + sum.log_mag - 0.5 * (std::norm(a) + std::norm(b)) +
                      0.5 * (std::norm(u[0]) + std::norm(v[0])) - u[0] * std::conj(v[0]);
    const cplx cof = cofactor_cn(0.0, n, e.z, u) * std::conj(cofactor_cn(0.0, n, e.z, v));
    CHECK(rel_err(s.L, std::exp(logk) * cof) <= 1e-10);

    const ModelParams q{2, 0.5, 256};
    const EdgePoint eq = edge_point_sample(q, 9);
    const Point uu{cplx(0.2, 0.1), cplx(-0.3, 0.0)}, vv{cplx(0.1, -0.4), cplx(0.0, 0.2)};
    CHECK(std::abs(normalized_kernel(q, eq, uu, vv).L - std::conj(normalized_kernel(q, eq, vv, uu).L)) <= 1e-12);
    CHECK_THROWS_AS(normalized_kernel(q, eq, uu, vv, {}, 1e-300), ConsistencyError);
}

TEST_CASE("edge kernel prediction") {
    const EdgePoint e = edge_point_sample({2, 0.3, 4}, 1);
    CHECK(edge_kernel_prediction(e, Point(2), Point(2)) == cplx(0.5, 0.0));
    for (double lambda : {-1.0, 0.3, 2.0}) {
        const Point u = lambda * e.normal;
        CHECK(rel_err(edge_kernel_prediction(e, u, u), 0.5 * erfc_complex(std::sqrt(2.0) * lambda)) <= 1e-14);
    }
    CHECK(std::abs(edge_kernel_prediction(e, 20.0 * e.normal, 20.0 * e.normal)) <= 1e-100);
    CHECK(std::abs(edge_kernel_prediction(e, -20.0 * e.normal, -20.0 * e.normal) - 1.0) <= 1e-15);
}

TEST_CASE("edge density prediction") {
    const int n = 400;
    for (int d = 1; d <= 3; ++d) {
        const ModelParams p{d, 0.0, n};
        const EdgePoint e = edge_point_sample(p, 2);
        const double f = std::tgamma(d + 1.0);
        const double expect = f / (2 * std::pow(M_PI, d)) - f / (3 * std::pow(M_PI, d) * std::sqrt(2 * M_PI) * 20.0);
        CHECK(edge_density_prediction(p, e, 0.0, n) == doctest::Approx(expect).epsilon(1e-14));
        CHECK(std::abs(edge_density_prediction(p, e, 30.0, n)) <= 1e-300);
    }
    const ModelParams p1{1, 0.5, n};
    const EdgePoint e1 = edge_point_sample(p1, 3);
    for (double lambda : {-0.7, 0.0, 1.2}) {
        const double lee_riser = erfc_complex(std::sqrt(2.0) * lambda).real() / (2 * M_PI) +
                                 e1.kappa / 20.0 * (lambda * lambda - 1) * std::exp(-2 * lambda * lambda) / (3 * M_PI * std::sqrt(2 * M_PI));
        CHECK(edge_density_prediction(p1, e1, lambda, n) == doctest::Approx(lee_riser).epsilon(1e-14));
    }
    const ModelParams p2{2, 0.5, n};
    const EdgePoint e2 = edge_point_sample(p2, 3);
    CHECK(edge_density_prediction(p2, e2, 0.0, n, ExpansionForm::Printed) !=
          doctest::Approx(edge_density_prediction(p2, e2, 0.0, n, ExpansionForm::Rederived)));
}

TEST_CASE("bulk prediction") {
    CHECK(rel_err(bulk_prediction(2, Point(2), Point(2)), 1.0 / (M_PI * M_PI)) <= 1e-15);
    const Point u{cplx(0.3, -0.7), cplx(1.1, 0.2)};
    CHECK(rel_err(bulk_prediction(2, u, u), 1.0 / (M_PI * M_PI)) <= 1e-15);
    CounterRng rng(62);
    for (int i = 0; i < 50; ++i) {
        const Point a = testutil::random_point(rng, 3, 2.0), b = testutil::random_point(rng, 3, 2.0);
        CHECK(std::abs(bulk_prediction(3, a, b)) <= std::pow(M_PI, -3) * (1 + 1e-15));
    }
}

TEST_CASE("refined d = 1 prediction") {
    const ModelParams p{1, 0.5, 256};
    const EdgePoint e = edge_point_sample(p, 4);
    CHECK(rel_err(d1_refined_prediction(e, 0.0, 0.0, 256), 1.0 / (2 * M_PI) - e.kappa / (3 * std::sqrt(2 * std::pow(M_PI, 3)) * 16.0)) <=
          1e-14);
    const cplx u(0.3, 0.1), v(-0.2, 0.4);
    CHECK(std::abs(d1_refined_prediction(e, u, v, 256) - std::conj(d1_refined_prediction(e, v, u, 256))) <= 1e-15);
    CounterRng rng(63);
    for (int i = 0; i < 10; ++i) {
        const double lambda = rng.uniform(-1.5, 1.5);
        const double diag = d1_refined_prediction(e, lambda, lambda, 256).real();
        CHECK(diag * M_PI == doctest::Approx(edge_density_prediction(p, e, lambda, 256) * M_PI).epsilon(1e-13));
    }
    CHECK_THROWS_AS(d1_refined_prediction(edge_point_sample({2, 0.5, 4}, 1), u, v, 16), UsageError);
    CHECK_THROWS_AS(d1_refined_prediction(edge_point_sample({1, 0.0, 4}, 1), u, v, 16), DomainError);
}

TEST_CASE("density path does not depend on cofactors") {
    const ModelParams p{2, 0.5, 256};
    const EdgePoint e = edge_point_sample(p, 8);
    const Point u = 0.7 * e.normal;
    const cplx c = cofactor_cn(0.5, 256, e.z, u);
    CHECK(std::abs(c * std::conj(c) - 1.0) <= 1e-15);
    const double via_kernel = std::pow(256.0, 2) * rho1_density(p, 16.0 * e.z + u);
    CHECK(scaled_edge_density(p, e, 0.7) == doctest::Approx(via_kernel).epsilon(1e-14));
}
