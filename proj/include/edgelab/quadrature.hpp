#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace edgelab {

template <class Real>
struct GaussRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

// Gauss-Legendre rule on [-1, 1]; Newton iteration carried out in Real.
template <class Real>
GaussRule<Real> gauss_legendre(int m) {
    using std::abs;
    GaussRule<Real> rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const Real eps = std::numeric_limits<Real>::epsilon();
    for (int i = 0; i < (m + 1) / 2; ++i) {
        Real x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        Real dp = 0;
        for (int it = 0; it < 100; ++it) {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) p0 = 1;
            dp = m * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= 4 * eps) break;
        }
        {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= m; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (m == 1) p0 = 1;
            dp = m * (x * p1 - p0) / (x * x - 1);
        }
        const Real w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = w;
    }
    return rule;
}

}  // namespace edgelab
