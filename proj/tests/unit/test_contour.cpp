#include <doctest.h>

#include "edgelab/contour.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/kernel.hpp"
#include "test_util.hpp"

using namespace edgelab;
using testutil::rel_err;

namespace {

SaddleFrame edge_frame(const ModelParams& p, const EdgePoint& e, const Point& u, const Point& v) {
    const ZPair z = zpm_map(p, e.z, u, v);
    return saddle_frame(p, z.plus, z.minus);
}

}  // namespace

TEST_CASE("contour kernel equals direct sum") {
    CounterRng rng(41);
    for (int d = 1; d <= 2; ++d) {
        for (double tau : {0.0, 0.3, 0.7}) {
            for (int n : {1, 5, 16}) {
                for (int i = 0; i < 20; ++i) {
                    const ModelParams p{d, tau, n};
                    const Point z = testutil::random_point(rng, d, 1.5), w = testutil::random_point(rng, d, 1.5);
                    CHECK(rel_err(kernel_contour(p, z, w), kernel_exact(p, z, w)) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("bulk and edge limits of the normalized integral") {
    const Point zero(1);
    const ModelParams p{1, 0.5, 256};
    const EdgePoint e = edge_point_sample(p, 3);
    const Point inner = 0.2 * e.z;
    const ZPair zi = zpm_map(p, inner, zero, zero);
    CHECK(std::abs(integral_I_tau(p, saddle_frame(p, zi.plus, zi.minus)).value - 1.0) <= 1e-10);

    double prev = 1.0;
    for (int n : {64, 1024, 16384}) {
        const ModelParams q{1, 0.5, n};
        const double gap = std::abs(integral_I_tau(q, edge_frame(q, e, zero, zero)).value - 0.5);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev <= 0.01);
}

TEST_CASE("tau = 0 integral against the partial sum") {
    CounterRng rng(42);
    for (int n : {1, 2, 7, 16, 32}) {
        for (int i = 0; i < 10; ++i) {
            const cplx zeta = 0.3 + testutil::random_disc(rng, 1.2);
            const ModelParams p{1, 0.0, n};
            const auto r = integral_I_zero(p, zeta);
            cplx sum = 0.0, t = 1.0;
            for (int j = 0; j < n; ++j) {
                sum += t;
                t *= static_cast<double>(n) * zeta / (j + 1.0);
            }
            CHECK(rel_err(r.value * std::exp(static_cast<double>(n) * zeta), sum) <= 1e-10);
        }
    }
    CHECK(integral_I_zero({2, 0.0, 8}, 0.0).value == cplx(1.0, 0.0));
    const ModelParams one{1, 0.0, 1};
    CHECK(rel_err(integral_I_zero(one, cplx(0.4, 0.2)).value * std::exp(cplx(0.4, 0.2)), 1.0) <= 1e-12);
    double prev = 1.0;
    for (int n : {64, 1024, 16384}) {
        const double gap = std::abs(integral_I_zero({1, 0.0, n}, 1.0).value - 0.5);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev <= 0.01);
}

TEST_CASE("quadrature and radius robustness") {
    const ModelParams p{2, 0.5, 256};
    const EdgePoint e = edge_point_sample(p, 5);
    const Point u{cplx(0.3, 0.2), cplx(-0.1, 0.25)}, v{cplx(0.0, -0.2), cplx(0.15, 0.1)};
    const SaddleFrame f = edge_frame(p, e, u, v);
    ContourConfig cfg;
    const auto base = integral_I_tau(p, f, cfg);
    CHECK(base.convergence <= cfg.tolerance);

    ContourConfig triple = cfg;
    triple.node_count = 3 * base.nodes;
    CHECK(rel_err(integral_I_tau(p, f, triple).value, base.value) <= 10 * cfg.tolerance);

    for (double scale : {0.5, 1.5}) {
        ContourConfig c = cfg;
        c.radius_offset = scale;
        CHECK(rel_err(integral_I_tau(p, f, c).value, base.value) <= 10 * cfg.tolerance);
    }

    ContourConfig in = cfg, out = cfg;
    in.pole_side = PoleSide::Enclose;
    out.pole_side = PoleSide::Exclude;
    const auto ri = integral_I_tau(p, f, in), ro = integral_I_tau(p, f, out);
    CHECK(ri.residue == 1.0);
    CHECK(ro.residue == 0.0);
    CHECK(ri.radius > p.tau);
    CHECK(ro.radius < p.tau);
    CHECK(rel_err(ri.value, ro.value) <= 10 * cfg.tolerance);

    const ModelParams q{1, 0.0, 128};
    ContourConfig i0 = cfg, o0 = cfg;
    i0.pole_side = PoleSide::Enclose;
    o0.pole_side = PoleSide::Exclude;
    const cplx zeta(1.02, -0.03);
    CHECK(rel_err(integral_I_zero(q, zeta, i0).value, integral_I_zero(q, zeta, o0).value) <= 10 * cfg.tolerance);
}

TEST_CASE("contour configuration errors") {
    ContourConfig bad;
    bad.node_count = 32;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = {};
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), UsageError);

    const ModelParams p{1, 0.5, 256};
    const EdgePoint e = edge_point_sample(p, 5);
    const Point zero(1);
    const SaddleFrame f = edge_frame(p, e, zero, zero);
    ContourConfig tight;
    tight.tolerance = 1e-300;
    tight.max_doublings = 1;
    CHECK_THROWS_AS(integral_I_tau(p, f, tight), QuadratureError);
    ContourConfig close;
    close.radius_offset = 1e-4;
    CHECK_THROWS_AS(integral_I_tau(p, f, close), ContourError);
    CHECK_THROWS_AS(integral_I_tau({1, 0.0, 16}, f), UsageError);
}

TEST_CASE("maximum principle on the saddle circle") {
    CounterRng rng(43);
    for (int i = 0; i < 20; ++i) {
        const double tau = 0.1 + 0.8 * rng.uniform();
        const ModelParams p{1 + i % 3, tau, 64};
        const EdgePoint e = edge_point_sample(p, 300 + i);
        const Point u = testutil::random_point(rng, p.d, 0.5), v = testutil::random_point(rng, p.d, 0.5);
        const SaddleFrame f = edge_frame(p, e, u, v);
        const auto m = max_principle_check(f, 10000);
        CHECK(m.max_violation <= 1e-12);
        const double gap = std::abs(std::remainder(m.argmax_angle - std::arg(f.a_inv), 2 * M_PI));
        CHECK(gap <= m.grid_step * (1 + 1e-9));
    }
    // xi_- = 0: two maxima of equal height at a^-1 and b^-1
    const ModelParams p{1, 0.5, 64};
    const double s2 = std::sqrt(2.0);
    const SaddleFrame f = saddle_frame(p, s2 * std::cosh(cplx(0.4, 0.3)), s2 * std::cos(0.7));
    const auto m = max_principle_check(f, 20000);
    REQUIRE(m.local_maxima.size() >= 2);
    const double t1 = m.local_maxima[0].first, t2 = m.local_maxima[1].first;
    auto near = [&](double t, cplx s) { return std::abs(std::remainder(t - std::arg(s), 2 * M_PI)) <= 1.5 * m.grid_step; };
    CHECK(((near(t1, f.a_inv) && near(t2, f.b_inv)) || (near(t1, f.b_inv) && near(t2, f.a_inv))));
    CHECK(std::abs(m.local_maxima[0].second) <= 1e-6);
    CHECK(std::abs(m.local_maxima[1].second) <= 1e-6);
    CHECK_THROWS_AS(max_principle_check(f, 4), UsageError);
}
