#pragma once

#include <cmath>
#include <complex>

#include "edgelab/numerics.hpp"
#include "edgelab/point.hpp"
#include "edgelab/rng.hpp"

namespace testutil {

using edgelab::cplx;

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

inline cplx random_disc(edgelab::CounterRng& rng, double radius) {
    return std::polar(radius * std::sqrt(rng.uniform()), rng.uniform(0.0, 2.0 * M_PI));
}

inline edgelab::Point random_point(edgelab::CounterRng& rng, int d, double radius) {
    edgelab::Point p(d);
    for (int k = 0; k < d; ++k) p[k] = random_disc(rng, radius);
    return p;
}

}  // namespace testutil
