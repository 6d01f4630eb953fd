#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "edgelab/saddle_lab.hpp"

namespace edgelab {

namespace {

using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<130>>;
using Complex = boost::multiprecision::number<boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<130>>>;

cplx to_double(const Complex& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

PoleIntegralCheck pole_gaussian_integral_mp(int n, cplx p, double l1, double l2) {
    if (n < 1) throw DomainError("pole_gaussian_integral_mp: n must be >= 1");
    require_finite(p, "pole_gaussian_integral_mp");
    const Complex pm(Real(p.real()), Real(p.imag()));
    auto erfcx = [](const Complex& w) {
        const Complex erf = erf_series<Real, Complex>(w);
        return exp(w * w) * (Complex(1) - erf);
    };
    const auto r = pole_gaussian_integral_t<Real, Complex>(n, pm, Real(l1), Real(l2), erfcx, 60);
    PoleIntegralCheck out;
    out.lhs = to_double(r.lhs);
    out.rhs = to_double(r.rhs);
    out.abs_difference = static_cast<double>(abs(r.lhs - r.rhs));
    out.envelope = 10.0 * (std::exp(-n * l1 * l1) + std::exp(-n * l2 * l2)) / n;
    return out;
}

}  // namespace edgelab
