#include "edgelab/droplet.hpp"

#include <cmath>
#include <numbers>

#include "edgelab/errors.hpp"
#include "edgelab/rng.hpp"

namespace edgelab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_tau_open(double tau, const char* what) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError(std::string(what) + ": requires 0 < tau < 1");
}

// root of zeta^2 - 2 z zeta + 2 = 0 with |zeta| >= sqrt(2)
cplx outer_root(cplx z) {
    const cplx s = std::sqrt(z * z - 2.0);
    const cplx r1 = z + s, r2 = z - s;
    return std::abs(r1) >= std::abs(r2) ? r1 : r2;
}

std::vector<double> unit_vector(CounterRng& rng, int d) {
    std::vector<double> p(d);
    double s = 0.0;
    do {
        s = 0.0;
        for (auto& x : p) {
            x = rng.normal();
            s += x * x;
        }
    } while (s < 1e-20);
    for (auto& x : p) x /= std::sqrt(s);
    return p;
}

}  // namespace

double CounterRng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double droplet_form(double tau, const Point& z) {
    const double re2 = z.real_part().norm2();
    const double im2 = z.imag_part().norm2();
    return (1.0 - tau) / (1.0 + tau) * re2 + (1.0 + tau) / (1.0 - tau) * im2;
}

DropletRegion droplet_classify(const ModelParams& params, const Point& z, double tol) {
    params.validate();
    require_dimension(z, params.d, "droplet_classify");
    const double q = droplet_form(params.tau, z) - 1.0;
    if (std::abs(q) <= tol) return DropletRegion::Edge;
    return q < 0.0 ? DropletRegion::Inside : DropletRegion::Outside;
}

Point outward_normal(double tau, const Point& z, double tol) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("outward_normal: tau must lie in [0,1)");
    if (std::abs(droplet_form(tau, z) - 1.0) > tol) throw DomainError("outward_normal: point is not on the droplet edge");
    const double a = (1.0 - tau) * (1.0 - tau);
    const double b = (1.0 + tau) * (1.0 + tau);
    Point nrm(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) nrm[i] = cplx(a * z[i].real(), b * z[i].imag());
    const double scale = std::sqrt(a * a * z.real_part().norm2() + b * b * z.imag_part().norm2());
    return (1.0 / scale) * nrm;
}

double curvature_kappa(double tau, const Point& z) {
    const double re2 = z.real_part().norm2();
    const double im2 = z.imag_part().norm2();
    const double t = re2 - im2 - 4.0 * tau / (1.0 - tau * tau);
    return std::pow(t * t + 4.0 * re2 * im2, -0.75);
}

EdgePoint make_edge_point(double tau, const Point& z, double tol) {
    EdgePoint e;
    e.z = z;
    e.tau = tau;
    e.normal = outward_normal(tau, z, tol);
    e.kappa = curvature_kappa(tau, z);
    const double A = std::sqrt((1.0 + tau) / (1.0 - tau));
    e.eta = std::atan2(z.imag_part().norm() * A, z.real_part().norm() / A);
    return e;
}

EdgePoint edge_point_from(double tau, const std::vector<double>& p, const std::vector<double>& q, double theta) {
    if (p.size() != q.size() || p.empty()) throw UsageError("edge_point_from: p and q must have equal positive length");
    const double A = std::sqrt((1.0 + tau) / (1.0 - tau));
    double np = 0.0, nq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        np += p[i] * p[i];
        nq += q[i] * q[i];
    }
    np = std::sqrt(np);
    nq = std::sqrt(nq);
    Point z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        z[i] = cplx(A * std::cos(theta) * p[i] / np, std::sin(theta) * q[i] / (A * nq));
    }
    return make_edge_point(tau, z, 1e-9);
}

EdgePoint edge_point_sample(const ModelParams& params, std::uint64_t direction_seed) {
    params.validate();
    CounterRng rng(direction_seed, 0xed6e);
    const auto p = unit_vector(rng, params.d);
    const auto q = unit_vector(rng, params.d);
    const double theta = rng.uniform(0.0, 0.5 * std::numbers::pi);
    return edge_point_from(params.tau, p, q, theta);
}

EllipticCoords elliptic_coords(cplx zeta) {
    require_finite(zeta, "elliptic_coords");
    if (std::abs(zeta * zeta - 2.0) < 1e-14) throw DegenerateSaddle("elliptic_coords: argument at a focus");
    cplx w = std::log(outer_root(zeta) / kSqrt2);
    double xi = std::max(w.real(), 0.0);
    double eta = w.imag();
    if (eta <= -std::numbers::pi) eta = std::numbers::pi;
    if (xi == 0.0 && eta < 0.0) eta = -eta;
    return {xi, eta};
}

double xi_edge(double tau) {
    check_tau_open(tau, "xi_edge");
    return 0.5 * std::log(1.0 / tau);
}

double sinh_2xi(double tau) { return (1.0 - tau * tau) / (2.0 * tau); }

double edge_g(double tau, double eta) {
    const double xi = xi_edge(tau);
    return std::sqrt(sinh_2xi(tau)) / std::abs(std::sinh(cplx(xi, eta)));
}

ZPair edge_zhat(double tau, double eta) {
    const double xi = xi_edge(tau);
    return {kSqrt2 * std::cosh(cplx(xi, eta)), kSqrt2 * std::cosh(cplx(xi, -eta))};
}

ZPair zpm_pair(double tau, const Point& x, const Point& y, bool flip_sum, bool flip_diff) {
    check_tau_open(tau, "zpm_pair");
    const Point yc = y.conj();
    const cplx sa = (x + yc).square_sum();
    const cplx sb = (x - yc).square_sum();
    cplx ra = std::sqrt(sa), rb = std::sqrt(sb);
    if (flip_sum) ra = -ra;
    if (flip_diff) rb = -rb;
    const double c = 0.5 * std::sqrt(sinh_2xi(tau));
    return {c * (ra + rb), c * (ra - rb)};
}

ZPair zpm_map(const ModelParams& params, const Point& z, const Point& u, const Point& v, bool flip_sum, bool flip_diff) {
    params.validate();
    check_tau_open(params.tau, "zpm_map");
    require_dimension(z, params.d, "zpm_map");
    require_dimension(u, params.d, "zpm_map");
    require_dimension(v, params.d, "zpm_map");
    const double rn = 1.0 / std::sqrt(static_cast<double>(params.n));
    return zpm_pair(params.tau, z + rn * u, z + rn * v, flip_sum, flip_diff);
}

ZPair align_to_edge(ZPair zp, const EdgePoint& edge) {
    const ZPair h = edge_zhat(edge.tau, edge.eta);
    const ZPair cand[4] = {zp, {zp.minus, zp.plus}, {-zp.minus, -zp.plus}, {-zp.plus, -zp.minus}};
    int best = 0;
    double best_d = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double dist = std::abs(cand[i].plus - h.plus) + std::abs(cand[i].minus - h.minus);
        if (i == 0 || dist < best_d) {
            best = i;
            best_d = dist;
        }
    }
    return cand[best];
}

DeltaPair delta_pm(ZPair zp, const EdgePoint& edge) {
    const ZPair h = edge_zhat(edge.tau, edge.eta);
    const double xi = xi_edge(edge.tau);
    const cplx sp = kSqrt2 * std::sinh(cplx(xi, edge.eta));
    const cplx sm = kSqrt2 * std::sinh(cplx(xi, -edge.eta));
    if (std::abs(sp) < 1e-14 || std::abs(sm) < 1e-14) throw DegenerateSaddle("delta_pm: focus degeneracy");
    return {(zp.plus - h.plus) / sp, (zp.minus - h.minus) / sm};
}

ZPair reconstruct_zpm(DeltaPair delta, const EdgePoint& edge) {
    const ZPair h = edge_zhat(edge.tau, edge.eta);
    const double xi = xi_edge(edge.tau);
    return {h.plus + kSqrt2 * std::sinh(cplx(xi, edge.eta)) * delta.plus,
            h.minus + kSqrt2 * std::sinh(cplx(xi, -edge.eta)) * delta.minus};
}

cplx zeta_tau0(int n, const Point& z, const Point& u, const Point& v) {
    const double rn = 1.0 / std::sqrt(static_cast<double>(n));
    return dot(z + rn * u, z + rn * v);
}

cplx PhaseFunction::value(cplx s) const {
    return s / (1.0 + s) * P * 0.5 - s / (1.0 - s) * Q * 0.5 - std::log(s) + std::log(tau);
}

cplx PhaseFunction::d1(cplx s) const {
    const cplx p = 1.0 + s, m = 1.0 - s;
    return P / (2.0 * p * p) - Q / (2.0 * m * m) - 1.0 / s;
}

cplx PhaseFunction::d2(cplx s) const {
    const cplx p = 1.0 + s, m = 1.0 - s;
    return -P / (p * p * p) - Q / (m * m * m) + 1.0 / (s * s);
}

cplx PhaseFunction::d3(cplx s) const {
    const cplx p = 1.0 + s, m = 1.0 - s;
    return 3.0 * P / (p * p * p * p) - 3.0 * Q / (m * m * m * m) - 2.0 / (s * s * s);
}

cplx PhaseFunction::minus_pole(cplx s) const {
    const cplx ds = s - tau;
    return ds / ((1.0 + s) * (1.0 + tau)) * P * 0.5 - ds / ((1.0 - s) * (1.0 - tau)) * Q * 0.5 - std::log(s / tau);
}

SaddleFrame saddle_frame(const ModelParams& params, cplx z_plus, cplx z_minus) {
    params.validate();
    check_tau_open(params.tau, "saddle_frame");
    require_finite(z_plus, "saddle_frame");
    require_finite(z_minus, "saddle_frame");
    const double focal_tol = 1e-10;
    if (std::abs(z_plus * z_plus - 2.0) < focal_tol || std::abs(z_minus * z_minus - 2.0) < focal_tol) {
        throw DegenerateSaddle("saddle_frame: z_+ or z_- at a focus (coalescing saddles)");
    }
    SaddleFrame f;
    f.tau = params.tau;
    f.z_plus = z_plus;
    f.z_minus = z_minus;
    const cplx zp = outer_root(z_plus), zm = outer_root(z_minus);
    f.a = 0.5 * zp * zm;
    f.a_inv = 2.0 / (zp * zm);
    f.b = zp / zm;
    f.b_inv = zm / zp;
    f.w_plus = elliptic_coords(z_plus);
    f.w_minus = elliptic_coords(z_minus);
    const PhaseFunction F = f.phase();
    f.F_at_a_inv = F.value(f.a_inv);
    f.F2_at_a_inv = F.d2(f.a_inv);
    const cplx s[4] = {f.a, f.a_inv, f.b, f.b_inv};
    for (int i = 0; i < 4; ++i) f.residuals[i] = std::abs(F.d1(s[i]));
    return f;
}

cplx F2_elliptic(const SaddleFrame& f) {
    const cplx wp = std::log(outer_root(f.z_plus) / kSqrt2);
    const cplx wm = std::log(outer_root(f.z_minus) / kSqrt2);
    return 2.0 * f.a * f.a * std::sinh(wp) * std::sinh(wm) / std::sinh(wp + wm);
}

}  // namespace edgelab
