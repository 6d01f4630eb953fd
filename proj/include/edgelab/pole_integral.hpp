#pragma once

#include <cmath>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "edgelab/errors.hpp"
#include "edgelab/quadrature.hpp"

namespace edgelab {

template <class Complex>
struct PoleIntegral {
    Complex lhs;
    Complex rhs;
};

// erf by Maclaurin series in the working precision of Complex.
template <class Real, class Complex>
Complex erf_series(const Complex& z) {
    using std::abs;
    using std::exp;
    using std::imag;
    using std::real;
    using std::sqrt;
    const Real eps = std::numeric_limits<Real>::epsilon();
    const Complex mz2 = -z * z;
    const Real az2 = abs(z) * abs(z);
    Complex term = z;
    Complex sum = z;
    for (int k = 1; k < 100000; ++k) {
        term *= mz2 / Real(k);
        const Complex c = term / Real(2 * k + 1);
        sum += c;
        if (k > az2 && abs(c) <= eps * abs(sum)) break;
    }
    const Real two_over_sqrt_pi = 2 / sqrt(boost::math::constants::pi<Real>());
    return two_over_sqrt_pi * sum;
}

// Polygonal contour from l1 to l2 that keeps p to its right (below the path).
template <class Real, class Complex>
std::vector<Complex> pole_path(const Complex& p, Real l1, Real l2, int n) {
    using std::abs;
    using std::exp;
    using std::imag;
    using std::real;
    using std::sqrt;
    const Real px = real(p);
    const Real py = imag(p);
    const Real gap = Real(1) / 20;
    if (py <= -gap) return {Complex(l1, 0), Complex(l2, 0)};
    Real half = Real(1) / 4;
    if ((px - l1) / 2 < half) half = (px - l1) / 2;
    if ((l2 - px) / 2 < half) half = (l2 - px) / 2;
    // |exp(-n t^2)| on the detour grows like exp(n (h^2 - Im(p)^2)); keep the clearance near one Gaussian width
    Real clearance = Real(1) / sqrt(Real(n));
    if (clearance > Real(1) / 4) clearance = Real(1) / 4;
    const Real h = (py > 0 ? py : Real(0)) + clearance;
    return {Complex(l1, 0), Complex(px - half, 0), Complex(px - half, h), Complex(px + half, h), Complex(px + half, 0),
            Complex(l2, 0)};
}

// Integral of exp(-n t^2)/(t - p) along the path with p on its right, against -pi i erfcx(i sqrt(n) p).
template <class Real, class Complex, class Erfcx>
PoleIntegral<Complex> pole_gaussian_integral_t(int n, const Complex& p, Real l1, Real l2, const Erfcx& erfcx,
                                               int nodes_per_panel = 40) {
    using std::abs;
    using std::exp;
    using std::imag;
    using std::real;
    using std::sqrt;
    const Real px = real(p);
    const Real delta = Real(1) / 100;
    if (!(l1 < 0 && 0 < l2)) throw DomainError("pole_gaussian_integral: requires l1 < 0 < l2");
    if (!(l1 + delta < px && px < l2 - delta)) throw DomainError("pole_gaussian_integral: pole too close to an endpoint");
    const auto rule = gauss_legendre<Real>(nodes_per_panel);
    const auto path = pole_path<Real, Complex>(p, l1, l2, n);
    const Real panel_width = Real(1) / 20 < Real(1) / (2 * sqrt(Real(n))) ? Real(1) / 20 : Real(1) / (2 * sqrt(Real(n)));
    Complex total(0, 0);
    for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
        const Complex a = path[seg], b = path[seg + 1];
        const Real len = abs(b - a);
        int panels = static_cast<int>(std::ceil(static_cast<double>(len / panel_width)));
        if (panels < 1) panels = 1;
        for (int k = 0; k < panels; ++k) {
            const Complex pa = a + (b - a) * (Real(k) / panels);
            const Complex pb = a + (b - a) * (Real(k + 1) / panels);
            const Complex mid = (pa + pb) / Real(2);
            const Complex hw = (pb - pa) / Real(2);
            for (int i = 0; i < nodes_per_panel; ++i) {
                const Complex t = mid + hw * rule.nodes[i];
                total += rule.weights[i] * hw * exp(-Real(n) * t * t) / (t - p);
            }
        }
    }
    const Complex i_unit(0, 1);
    const Complex w = i_unit * sqrt(Real(n)) * p;
    const Complex rhs = -boost::math::constants::pi<Real>() * i_unit * erfcx(w);
    return {total, rhs};
}

}  // namespace edgelab
