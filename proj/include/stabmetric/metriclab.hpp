#pragma once

// Property checkers for geodesic metric spaces: geodesic verification,
// CAT(0) comparison inequalities, delta-slim triangles and non-unique
// geodesics. Checkers refute; a pass only means no violation was sampled.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stabmetric/common.hpp"
#include "stabmetric/lin2.hpp"
#include "stabmetric/quotient.hpp"
#include "stabmetric/stabmodel.hpp"

namespace stabmetric {

template <class Point>
struct SpaceHandle {
    std::string name;
    std::function<double(const Point&, const Point&)> dist;
    /// Constant-speed geodesic from x (t = 0) to y (t = 1).
    std::function<Point(const Point&, const Point&, double)> geodesic;
    /// Flat coordinates, for reports.
    std::function<std::vector<double>(const Point&)> coords;
};

enum class CertificateKind { cat0_violation, slim_violation, nonunique_geodesic };

inline const char* to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::cat0_violation: return "cat0-violation";
        case CertificateKind::slim_violation: return "slim-violation";
        case CertificateKind::nonunique_geodesic: return "nonunique-geodesic";
    }
    return "?";
}

/// Point on side `side` of a triangle (0 = [x,y], 1 = [y,z], 2 = [z,x]) at
/// parameter t, or on the geodesic [x,y] when side = -1.
struct SidePoint {
    int side = 0;
    double t = 0.0;
};

template <class Point>
struct TriangleCertificate {
    CertificateKind kind = CertificateKind::cat0_violation;
    std::vector<Point> vertices;
    std::vector<Point> witnesses;
    std::vector<SidePoint> witness_params;
    double margin = 0.0;
    /// delta for slim violations, tolerance for CAT(0) checks, additivity
    /// residual for non-unique geodesics.
    double parameter = 0.0;
    std::uint64_t seed = 0;
    int resolution = 0;
};

enum class RejectReason { on_geodesic, not_additive };

inline const char* to_string(RejectReason r) {
    return r == RejectReason::on_geodesic ? "RejectOnGeodesic" : "RejectNotAdditive";
}

struct Rejection {
    RejectReason reason;
    double value = 0.0;
};

using Planar = Vec2;

/// Euclidean triangle with |xy| = a, |yz| = b, |zx| = c; x at the origin, y
/// on the positive axis, z in the closed upper half-plane.
inline std::array<Planar, 3> comparison_triangle(double a, double b, double c) {
    if (a < 0.0 || b < 0.0 || c < 0.0) throw BadSideLengths("negative side length");
    const double slack = 1e-12 * std::max(1.0, a + b + c);
    if (a > b + c + slack || b > a + c + slack || c > a + b + slack)
        throw BadSideLengths("side lengths violate the triangle inequality");
    if (a == 0.0) {
        if (std::abs(b - c) > slack) throw DegenerateBase("a = 0 requires b = c");
        return {Planar{0.0, 0.0}, Planar{0.0, 0.0}, Planar{c, 0.0}};
    }
    const double zx = (a * a + c * c - b * b) / (2.0 * a);
    const double zy = std::sqrt(std::max(0.0, c * c - zx * zx));
    return {Planar{0.0, 0.0}, Planar{a, 0.0}, Planar{zx, zy}};
}

namespace detail {

inline double planar_dist(const Planar& p, const Planar& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

inline Planar lerp(const Planar& p, const Planar& q, double t) {
    return {p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
}

template <class Point>
struct Triangle {
    const SpaceHandle<Point>& space;
    std::array<Point, 3> v;

    Point at(const SidePoint& s) const {
        if (s.side == -1) return space.geodesic(v[0], v[1], s.t);
        return space.geodesic(v[s.side], v[(s.side + 1) % 3], s.t);
    }
};

inline double param(int k, int resolution) { return static_cast<double>(k) / resolution; }

/// Minimum of `f` over t in [0,1] sampled at `resolution`, then resampled
/// at 64 subdivisions of the two cells around the best node.
template <class F>
std::pair<double, double> sampled_min(F&& f, int resolution) {
    double best_t = 0.0, best = f(0.0);
    for (int k = 1; k <= resolution; ++k) {
        const double t = param(k, resolution), v = f(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    const double lo = std::max(0.0, best_t - 1.0 / resolution);
    const double hi = std::min(1.0, best_t + 1.0 / resolution);
    for (int k = 0; k <= 64; ++k) {
        const double t = lo + (hi - lo) * k / 64.0;
        const double v = f(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    return {best, best_t};
}

}  // namespace detail

// ---------------------------------------------------------------- CAT(0)

/// d(p, q) - d_E(p_bar, q_bar) for two triangle points.
template <class Point>
double cat0_excess(const SpaceHandle<Point>& space, const std::array<Point, 3>& tri, const SidePoint& p,
                   const SidePoint& q) {
    const detail::Triangle<Point> t{space, tri};
    const auto bar = comparison_triangle(space.dist(tri[0], tri[1]), space.dist(tri[1], tri[2]),
                                         space.dist(tri[2], tri[0]));
    auto cmp = [&](const SidePoint& s) { return detail::lerp(bar[s.side], bar[(s.side + 1) % 3], s.t); };
    return space.dist(t.at(p), t.at(q)) - detail::planar_dist(cmp(p), cmp(q));
}

struct Cat0Outcome {
    double max_excess = 0.0;
    SidePoint p, q;
};

template <class Point>
Cat0Outcome cat0_scan(const SpaceHandle<Point>& space, const std::array<Point, 3>& tri, int resolution) {
    const auto bar = comparison_triangle(space.dist(tri[0], tri[1]), space.dist(tri[1], tri[2]),
                                         space.dist(tri[2], tri[0]));
    const detail::Triangle<Point> t{space, tri};
    std::vector<SidePoint> params;
    std::vector<Point> pts;
    std::vector<Planar> cmp;
    for (int s = 0; s < 3; ++s) {
        for (int k = 0; k <= resolution; ++k) {
            const SidePoint sp{s, detail::param(k, resolution)};
            params.push_back(sp);
            pts.push_back(t.at(sp));
            cmp.push_back(detail::lerp(bar[s], bar[(s + 1) % 3], sp.t));
        }
    }
    Cat0Outcome out{-1.0, {}, {}};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double e = space.dist(pts[i], pts[j]) - detail::planar_dist(cmp[i], cmp[j]);
            if (e > out.max_excess) out = {e, params[i], params[j]};
        }
    }
    // One refinement pass around the worst pair.
    const Cat0Outcome coarse = out;
    const double h = 1.0 / resolution;
    for (int a = -16; a <= 16; ++a) {
        for (int b = -16; b <= 16; ++b) {
            const SidePoint p{coarse.p.side, std::clamp(coarse.p.t + h * a / 16.0, 0.0, 1.0)};
            const SidePoint q{coarse.q.side, std::clamp(coarse.q.t + h * b / 16.0, 0.0, 1.0)};
            const double e = cat0_excess(space, tri, p, q);
            if (e > out.max_excess) out = {e, p, q};
        }
    }
    return out;
}

/// Certificate if some sampled pair violates d(p,q) <= d_E(p_bar, q_bar) by more than tol.
template <class Point>
std::optional<TriangleCertificate<Point>> cat0_check(const SpaceHandle<Point>& space, const Point& x, const Point& y,
                                                     const Point& z, int resolution = 512, double tol = 1e-9,
                                                     std::uint64_t seed = 0) {
    const std::array<Point, 3> tri{x, y, z};
    const Cat0Outcome o = cat0_scan(space, tri, resolution);
    if (!(o.max_excess > tol)) return std::nullopt;
    const detail::Triangle<Point> t{space, tri};
    TriangleCertificate<Point> cert;
    cert.kind = CertificateKind::cat0_violation;
    cert.vertices = {x, y, z};
    cert.witnesses = {t.at(o.p), t.at(o.q)};
    cert.witness_params = {o.p, o.q};
    cert.margin = cat0_excess(space, tri, o.p, o.q);
    cert.parameter = tol;
    cert.seed = seed;
    cert.resolution = resolution;
    return cert;
}

// ---------------------------------------------------------------- delta-slim

/// Distance from the point at `sp` to the union of the two other sides,
/// sampled at `resolution` with one local refinement per side.
template <class Point>
double slim_set_distance(const SpaceHandle<Point>& space, const std::array<Point, 3>& tri, const SidePoint& sp,
                         int resolution) {
    const detail::Triangle<Point> t{space, tri};
    const Point p = t.at(sp);
    double best = std::numeric_limits<double>::infinity();
    for (int other = 0; other < 3; ++other) {
        if (other == sp.side) continue;
        const auto [v, at] =
            detail::sampled_min([&](double s) { return space.dist(p, t.at({other, s})); }, resolution);
        (void)at;
        best = std::min(best, v);
    }
    return best;
}

/// Certificate if some sampled side point is farther than delta from the other two sides.
template <class Point>
std::optional<TriangleCertificate<Point>> slim_check(const SpaceHandle<Point>& space, const Point& x, const Point& y,
                                                     const Point& z, double delta, int resolution = 512,
                                                     std::uint64_t seed = 0) {
    const std::array<Point, 3> tri{x, y, z};
    const detail::Triangle<Point> t{space, tri};
    std::array<std::vector<Point>, 3> samples;
    for (int s = 0; s < 3; ++s)
        for (int k = 0; k <= resolution; ++k) samples[s].push_back(t.at({s, detail::param(k, resolution)}));

    double worst = -1.0;
    SidePoint worst_at{};
    for (int s = 0; s < 3; ++s) {
        for (int k = 0; k <= resolution; ++k) {
            double m = std::numeric_limits<double>::infinity();
            for (int o = 0; o < 3 && m > worst; ++o) {
                if (o == s) continue;
                for (const Point& q : samples[o]) m = std::min(m, space.dist(samples[s][k], q));
            }
            if (m > worst) {
                worst = m;
                worst_at = {s, detail::param(k, resolution)};
            }
        }
    }
    const double refined = slim_set_distance(space, tri, worst_at, resolution);
    if (!(refined > delta)) return std::nullopt;
    TriangleCertificate<Point> cert;
    cert.kind = CertificateKind::slim_violation;
    cert.vertices = {x, y, z};
    cert.witnesses = {t.at(worst_at)};
    cert.witness_params = {worst_at};
    cert.margin = refined - delta;
    cert.parameter = delta;
    cert.seed = seed;
    cert.resolution = resolution;
    return cert;
}

// ---------------------------------------------------------------- geodesics

/// Distance from z to the handle's geodesic [x, y].
template <class Point>
std::pair<double, double> distance_to_geodesic(const SpaceHandle<Point>& space, const Point& x, const Point& y,
                                               const Point& z, int resolution) {
    return detail::sampled_min([&](double t) { return space.dist(z, space.geodesic(x, y, t)); }, resolution);
}

template <class Point>
using GeodesicCheck = std::variant<TriangleCertificate<Point>, Rejection>;

/// Certifies that the broken path x -> z -> y is a geodesic different from
/// the handle's geodesic [x, y].
template <class Point>
GeodesicCheck<Point> nonunique_geodesic_check(const SpaceHandle<Point>& space, const Point& x, const Point& z,
                                              const Point& y, int resolution = 512, std::uint64_t seed = 0) {
    const double residual = std::abs(space.dist(x, z) + space.dist(z, y) - space.dist(x, y));
    if (residual > 1e-12) return Rejection{RejectReason::not_additive, residual};
    const auto [off, at] = distance_to_geodesic(space, x, y, z, resolution);
    if (!(off > 1e-9)) return Rejection{RejectReason::on_geodesic, off};
    TriangleCertificate<Point> cert;
    cert.kind = CertificateKind::nonunique_geodesic;
    cert.vertices = {x, z, y};
    cert.witnesses = {z, space.geodesic(x, y, at)};
    cert.witness_params = {SidePoint{-1, at}};
    cert.margin = off;
    cert.parameter = residual;
    cert.seed = seed;
    cert.resolution = resolution;
    return cert;
}

/// max over sampled (t, t') of |d(path(t), path(t')) - |t - t'| d(path(0), path(1))|.
template <class Point, class Dist, class Path>
double path_deviation(Dist&& dist, Path&& path, int resolution = 64) {
    std::vector<Point> pts;
    for (int k = 0; k <= resolution; ++k) pts.push_back(path(detail::param(k, resolution)));
    const double total = dist(pts.front(), pts.back());
    double worst = 0.0;
    for (int i = 0; i <= resolution; ++i) {
        for (int j = i + 1; j <= resolution; ++j) {
            const double expect = total * (detail::param(j, resolution) - detail::param(i, resolution));
            worst = std::max(worst, std::abs(dist(pts[i], pts[j]) - expect));
        }
    }
    return worst;
}

template <class Point>
double geodesic_deviation(const SpaceHandle<Point>& space, const Point& x, const Point& y, int resolution = 64) {
    return path_deviation<Point>(space.dist, [&](double t) { return space.geodesic(x, y, t); }, resolution);
}

/// Recomputes a certificate's margin from its stored vertices and parameters.
template <class Point>
double recheck(const SpaceHandle<Point>& space, const TriangleCertificate<Point>& cert) {
    switch (cert.kind) {
        case CertificateKind::cat0_violation: {
            const std::array<Point, 3> tri{cert.vertices[0], cert.vertices[1], cert.vertices[2]};
            return cat0_excess(space, tri, cert.witness_params[0], cert.witness_params[1]);
        }
        case CertificateKind::slim_violation: {
            const std::array<Point, 3> tri{cert.vertices[0], cert.vertices[1], cert.vertices[2]};
            return slim_set_distance(space, tri, cert.witness_params[0], cert.resolution) - cert.parameter;
        }
        case CertificateKind::nonunique_geodesic:
            return distance_to_geodesic(space, cert.vertices[0], cert.vertices[2], cert.vertices[1],
                                        cert.resolution)
                .first;
    }
    return 0.0;
}

// ---------------------------------------------------------------- handles

inline SpaceHandle<Planar> euclidean_plane() {
    return {"euclidean-plane", [](const Planar& p, const Planar& q) { return detail::planar_dist(p, q); },
            [](const Planar& p, const Planar& q, double t) { return detail::lerp(p, q, t); },
            [](const Planar& p) { return std::vector<double>{p[0], p[1]}; }};
}

/// The C-orbit sigma.C with d = max(|Re|, pi |Im|) and straight-line geodesics.
inline SpaceHandle<Complex> corbit_space() {
    return {"corbit", [](const Complex& a, const Complex& b) { return c_orbit_distance(a, b); },
            [](const Complex& a, const Complex& b, double t) { return (1.0 - t) * a + t * b; },
            [](const Complex& a) { return std::vector<double>{a.real(), a.imag()}; }};
}

inline R4 lerp4(const R4& x, const R4& y, double t) {
    R4 out{};
    for (int j = 0; j < 4; ++j) out[j] = (1.0 - t) * x[j] + t * y[j];
    return out;
}

inline SpaceHandle<R4> r4_space() {
    return {"r4", [](const R4& x, const R4& y) { return dprime(x, y); }, &lerp4,
            [](const R4& x) { return std::vector<double>(x.begin(), x.end()); }};
}

/// R^4/C with images of straight lines as geodesics.
inline SpaceHandle<QuotPoint> quotient_space() {
    return {"r4-quotient", [](const QuotPoint& x, const QuotPoint& y) { return quot_dist_closed(x, y); },
            [](const QuotPoint& x, const QuotPoint& y, double t) { return QuotPoint(lerp4(x.rep(), y.rep(), t)); },
            [](const QuotPoint& x) { return std::vector<double>(x.rep().begin(), x.rep().end()); }};
}

inline SpaceHandle<KroneckerPoint> kronecker_space() {
    return {"kronecker", [](const KroneckerPoint& p, const KroneckerPoint& q) { return d_B_closed(p, q); },
            [](const KroneckerPoint& p, const KroneckerPoint& q, double t) {
                return KroneckerPoint(lerp4(p.x, q.x, t), p.l);
            },
            [](const KroneckerPoint& p) { return std::vector<double>(p.x.begin(), p.x.end()); }};
}

/// Kronecker stability conditions modulo C, with the quotient of d_B.
inline SpaceHandle<KroneckerPoint> kronecker_quotient_space() {
    auto h = kronecker_space();
    h.name = "kronecker-quotient";
    h.dist = [](const KroneckerPoint& p, const KroneckerPoint& q) { return kronecker_quot_dist(p, q); };
    return h;
}

}  // namespace stabmetric
