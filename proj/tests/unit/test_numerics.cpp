#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <vector>

#include "edgelab/errors.hpp"
#include "test_util.hpp"

using namespace edgelab;
using testutil::rel_err;

namespace {

using mp_real = boost::multiprecision::cpp_bin_float_50;

// 1 - erf(x) from the Maclaurin series, 50 digits
mp_real erfc_maclaurin_mp(mp_real x, int terms) {
    mp_real sum = 0, term = x;
    for (int k = 0; k < terms; ++k) {
        sum += term / (2 * k + 1);
        term *= -x * x / (k + 1);
    }
    return 1 - 2 / sqrt(boost::math::constants::pi<mp_real>()) * sum;
}

double erfcx_asymptotic(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 8; ++k) {
        term *= -(2.0 * k - 1.0) / (2.0 * x * x);
        sum += term;
    }
    return sum / (x * std::sqrt(M_PI));
}

}  // namespace

TEST_CASE("erfc basic values") {
    CHECK(erfc_complex(0.0) == cplx(1.0, 0.0));
    CHECK(std::abs(erfc_complex(0.5) + erfc_complex(-0.5) - 2.0) <= 1e-14);
    const mp_real oracle = erfc_maclaurin_mp(1, 60);
    CHECK(rel_err(erfc_complex(1.0), cplx(static_cast<double>(oracle), 0.0)) <= 1e-14);
    CHECK(static_cast<double>(oracle) == doctest::Approx(0.15729920705028513066).epsilon(1e-15));
}

TEST_CASE("erfc complex reference values") {
    struct Ref {
        cplx z, v;
    };
    const Ref refs[] = {
        {{1, 1}, {-0.31615128169794764488, -0.19045346923783468628}},
        {{-2, 0.5}, {2.0035022433130363472, -0.0047409030312943361045}},
        {{3, -4}, {121.1869913950794441, -27.750337293623902498}},
        {{0.2, 5}, {-7375176188.3113575036, 3009574073.7179928505}},
        {{6, 2}, {7.6466264866152424002e-16, 8.16444869943385355e-16}},
        {{-1.5, -7}, {14937900509804786512.0, -5697269704269552080.7}},
    };
    for (const auto& r : refs) {
        CAPTURE(r.z);
        CHECK(rel_err(erfc_complex(r.z), r.v) <= 1e-13);
    }
}

TEST_CASE("erfc conjugate symmetry and real monotonicity") {
    CounterRng rng(11);
    for (int i = 0; i < 100; ++i) {
        const cplx z = testutil::random_disc(rng, 5.0);
        CHECK(std::abs(erfc_complex(std::conj(z)) - std::conj(erfc_complex(z))) <= 1e-13 * std::abs(erfc_complex(z)));
    }
    double prev = 2.0;
    for (int i = 0; i <= 220; ++i) {
        const double x = -5.0 + 0.05 * i;
        const double v = erfc_complex(x).real();
        CHECK(v > 0.0);
        CHECK(v < 2.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("erfcx values and consistency with erfc") {
    CHECK(erfcx_complex(0.0) == cplx(1.0, 0.0));
    CHECK(rel_err(erfcx_complex(0.3) * std::exp(-0.09), erfc_complex(0.3)) <= 1e-14);
    CHECK(rel_err(erfcx_complex(100.0), erfcx_asymptotic(100.0)) <= 1e-13);
    CHECK(rel_err(erfcx_complex(100.0), 0.005641613782989432903556457) <= 1e-13);
    CounterRng rng(12);
    for (int i = 0; i < 200; ++i) {
        const cplx z = testutil::random_disc(rng, 6.0);
        const cplx a = erfcx_complex(z) * std::exp(-z * z);
        CHECK(rel_err(a, erfc_complex(z)) <= 1e-11);
    }
}

TEST_CASE("special functions reject non-finite input") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(erfc_complex(cplx(inf, 0.0)), DomainError);
    CHECK_THROWS_AS(erfcx_complex(cplx(0.0, std::nan(""))), DomainError);
}

TEST_CASE("stable_sum") {
    const LogMagnitudePhase one[] = {{0.0, 1.0}};
    const auto s1 = stable_sum(one);
    CHECK(s1.log_mag == 0.0);
    CHECK(s1.phase == cplx(1.0, 0.0));

    const LogMagnitudePhase cancel[] = {{700.0, 1.0}, {700.0, -1.0}};
    const auto s2 = stable_sum(cancel);
    CHECK((s2.is_zero() || s2.log_mag <= 700.0 + std::log(1e-15)));

    CHECK_THROWS_AS(stable_sum(std::span<const LogMagnitudePhase>{}), UsageError);

    using mp_complex = boost::multiprecision::cpp_complex_50;
    CounterRng rng(13);
    std::vector<LogMagnitudePhase> terms(1000);
    mp_complex ref = 0;
    const mp_real shift = 50;
    for (auto& t : terms) {
        t.log_mag = rng.uniform(-50.0, 50.0);
        t.phase = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
        ref += mp_complex(t.phase.real(), t.phase.imag()) * exp(mp_real(t.log_mag) - shift);
    }
    const auto s = stable_sum(terms);
    const mp_complex got = mp_complex(s.phase.real(), s.phase.imag()) * exp(mp_real(s.log_mag) - shift);
    CHECK(static_cast<double>(abs(got - ref) / abs(ref)) <= 1e-12);

    for (int rep = 0; rep < 2; ++rep) {
        auto perm = terms;
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform() * (i + 1))]);
        }
        const auto sp = stable_sum(perm);
        CHECK(rel_err(std::exp(sp.log_mag - s.log_mag) * sp.phase, s.phase) <= 1e-12);
    }
}

TEST_CASE("LogMagnitudePhase round trip") {
    const cplx v(-3.5, 2.25);
    const auto l = LogMagnitudePhase::from_value(v);
    CHECK(std::abs(std::abs(l.phase) - 1.0) <= 1e-14);
    CHECK(rel_err(l.value(), v) <= 1e-15);
    CHECK(LogMagnitudePhase::from_value(0.0).is_zero());
    CHECK(LogMagnitudePhase::zero().value() == cplx(0.0, 0.0));
    const auto p = l * conj(l);
    CHECK(std::abs(p.value() - std::norm(v)) <= 1e-13 * std::norm(v));
}
