#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "edgelab/numerics.hpp"

namespace edgelab {

struct ModelParams {
    int d = 1;
    double tau = 0.0;
    int n = 1;

    void validate() const;
};

class Point {
public:
    Point() = default;
    explicit Point(std::size_t d) : coords_(d, cplx(0.0, 0.0)) {}
    Point(std::initializer_list<cplx> c) : coords_(c) {}
    explicit Point(std::vector<cplx> c) : coords_(std::move(c)) {}

    std::size_t size() const { return coords_.size(); }
    cplx& operator[](std::size_t i) { return coords_[i]; }
    const cplx& operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<cplx>& coords() const { return coords_; }

    Point conj() const;
    Point real_part() const;
    Point imag_part() const;
    double norm2() const;
    double norm() const;
    // sum of z_j^2 (no conjugation)
    cplx square_sum() const;

    Point& operator+=(const Point& o);
    Point& operator-=(const Point& o);
    Point& operator*=(cplx s);

private:
    std::vector<cplx> coords_;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(cplx s, Point a);
Point operator*(Point a, cplx s);

// z.w = sum z_j conj(w_j)
cplx dot(const Point& z, const Point& w);
// sum z_j w_j
cplx bilinear(const Point& z, const Point& w);

void require_dimension(const Point& p, int d, const char* what);

}  // namespace edgelab
