#include "edgelab/point.hpp"

#include <cmath>
#include <string>

#include "edgelab/errors.hpp"

namespace edgelab {

void ModelParams::validate() const {
    if (d < 1) throw DomainError("ModelParams: d must be >= 1");
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("ModelParams: tau must lie in [0,1)");
    if (n < 1) throw DomainError("ModelParams: n must be >= 1");
}

Point Point::conj() const {
    Point r(*this);
    for (auto& c : r.coords_) c = std::conj(c);
    return r;
}

Point Point::real_part() const {
    Point r(*this);
    for (auto& c : r.coords_) c = c.real();
    return r;
}

Point Point::imag_part() const {
    Point r(*this);
    for (auto& c : r.coords_) c = c.imag();
    return r;
}

double Point::norm2() const {
    double s = 0.0;
    for (const auto& c : coords_) s += std::norm(c);
    return s;
}

double Point::norm() const { return std::sqrt(norm2()); }

cplx Point::square_sum() const {
    cplx s = 0.0;
    for (const auto& c : coords_) s += c * c;
    return s;
}

Point& Point::operator+=(const Point& o) {
    if (o.size() != size()) throw UsageError("Point: dimension mismatch");
    for (std::size_t i = 0; i < size(); ++i) coords_[i] += o.coords_[i];
    return *this;
}

Point& Point::operator-=(const Point& o) {
    if (o.size() != size()) throw UsageError("Point: dimension mismatch");
    for (std::size_t i = 0; i < size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
}

Point& Point::operator*=(cplx s) {
    for (auto& c : coords_) c *= s;
    return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(cplx s, Point a) { return a *= s; }
Point operator*(Point a, cplx s) { return a *= s; }

cplx dot(const Point& z, const Point& w) {
    if (z.size() != w.size()) throw UsageError("dot: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * std::conj(w[i]);
    return s;
}

cplx bilinear(const Point& z, const Point& w) {
    if (z.size() != w.size()) throw UsageError("bilinear: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * w[i];
    return s;
}

void require_dimension(const Point& p, int d, const char* what) {
    if (static_cast<int>(p.size()) != d) {
        throw UsageError(std::string(what) + ": point of dimension " + std::to_string(p.size()) +
                         " where d = " + std::to_string(d) + " is required");
    }
}

}  // namespace edgelab
