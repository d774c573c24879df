#pragma once

// 2x2 real linear algebra and the universal cover of GL+(2,R).
//
// Angles on the circle (R^2 \ 0)/R_{>0} are measured in units of pi, so the
// circle is R/2Z and a half turn has length 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "stabmetric/common.hpp"

namespace stabmetric {

using Vec2 = std::array<double, 2>;

inline double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

/// Row-major 2x2 real matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }
    /// Rotation by angle pi * turns.
    static Mat2 rotation(double turns) {
        const double cs = std::cos(pi * turns), sn = std::sin(pi * turns);
        return {cs, -sn, sn, cs};
    }
    /// Real form of multiplication by the complex number w.
    static Mat2 complex_mult(Complex w) { return {w.real(), -w.imag(), w.imag(), w.real()}; }

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0) throw InvalidInput("singular 2x2 matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    constexpr Vec2 operator*(const Vec2& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }

    constexpr Mat2 operator*(const Mat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }

    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    constexpr bool operator==(const Mat2&) const = default;
};

inline double max_abs_diff(const Mat2& x, const Mat2& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

/// Largest singular value. Written through the conformal/anticonformal split
/// M = (p + q) so that no square root of a difference is taken.
inline double operator_norm(const Mat2& m) {
    const double conformal = std::hypot(m.a + m.d, m.b - m.c);
    const double anti = std::hypot(m.a - m.d, m.b + m.c);
    return 0.5 * (conformal + anti);
}

/// Roots of t^2 - tr t + det, largest modulus first; ties go to the larger
/// real part, then the larger imaginary part.
inline std::pair<Complex, Complex> eigen_pair(const Mat2& m) {
    const double tr = m.trace();
    const double dt = m.det();
    const double disc = tr * tr - 4.0 * dt;
    Complex r1, r2;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double big = 0.5 * (tr + (tr >= 0.0 ? s : -s));
        r1 = big;
        r2 = big != 0.0 ? Complex(dt / big) : Complex(0.0);
    } else {
        const double s = std::sqrt(-disc);
        r1 = Complex(0.5 * tr, 0.5 * s);
        r2 = Complex(0.5 * tr, -0.5 * s);
    }
    auto before = [](Complex x, Complex y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    };
    if (before(r2, r1)) std::swap(r1, r2);
    return {r1, r2};
}

/// Unit vector at angle pi * phi.
inline Vec2 unit_at(double phi) { return {std::cos(pi * phi), std::sin(pi * phi)}; }

/// Angle of v in units of pi, in [0, 2).
inline double angle_of(const Vec2& v) {
    double t = std::atan2(v[1], v[0]) / pi;
    if (t < 0.0) t += 2.0;
    if (t >= 2.0) t -= 2.0;
    return t;
}

/// An element (M, f) of the universal cover of GL+(2,R). The lift is
/// f = f0 + 2 * lift_index, where f0 is the continuous lift of the circle map
/// induced by M with f0(0) in [0, 2).
struct CoveredMap {
    Mat2 matrix = Mat2::identity();
    std::int64_t lift_index = 0;

    CoveredMap() = default;
    CoveredMap(const Mat2& m, std::int64_t k) : matrix(m), lift_index(k) {
        if (!(m.det() > 0.0)) throw NonPositiveDeterminant("covered map requires det > 0");
    }

    static CoveredMap identity() { return {}; }
};

/// f0(phi) for the base lift of M.
inline double base_lift_eval(const Mat2& m, double phi) {
    const double whole = std::floor(phi);
    const double s = phi - whole;
    const Vec2 e0 = m * Vec2{1.0, 0.0};
    const Vec2 es = m * unit_at(s);
    // Oriented angle from M e0 to M u(s); it lies in [0, 1] for s in [0, 1).
    const double cross = e0[0] * es[1] - e0[1] * es[0];
    const double dot = e0[0] * es[0] + e0[1] * es[1];
    double turn = std::atan2(cross, dot) / pi;
    if (turn < 0.0) turn = (s < 0.5) ? 0.0 : turn + 2.0;
    return angle_of(e0) + turn + whole;
}

inline double lift_eval(const CoveredMap& g, double phi) {
    return base_lift_eval(g.matrix, phi) + 2.0 * static_cast<double>(g.lift_index);
}

namespace detail {

inline std::int64_t lift_index_for(const Mat2& m, double value_at_zero) {
    return static_cast<std::int64_t>(std::llround((value_at_zero - base_lift_eval(m, 0.0)) / 2.0));
}

}  // namespace detail

/// Group product (M1 M2, f1 o f2).
inline CoveredMap compose(const CoveredMap& g1, const CoveredMap& g2) {
    const Mat2 m = g1.matrix * g2.matrix;
    const double at_zero = lift_eval(g1, lift_eval(g2, 0.0));
    return {m, detail::lift_index_for(m, at_zero)};
}

inline CoveredMap invert(const CoveredMap& g) {
    const Mat2 m = g.matrix.inverse();
    // f(f0_inv(0)) is an even integer 2j; shifting the inverse lift by -2j
    // sends it back to 0.
    const double psi = base_lift_eval(m, 0.0);
    const auto j = static_cast<std::int64_t>(std::llround(lift_eval(g, psi) / 2.0));
    return {m, -j};
}

/// Matrices and lifts at 0 agree to `tol`. The stored index alone is not
/// compared: f0(0) jumps from 0 to 2 when M e0 crosses the positive axis,
/// so nearly equal matrices can carry indices that differ by one.
inline bool same_element(const CoveredMap& x, const CoveredMap& y, double tol = 1e-12) {
    return max_abs_diff(x.matrix, y.matrix) <= tol && std::abs(lift_eval(x, 0.0) - lift_eval(y, 0.0)) <= tol;
}

/// The element of the C-subgroup acting on stability conditions by
/// Z -> exp(-i pi lambda) Z, phases shifted by Re lambda: M = exp(i pi lambda)
/// and f(phi) = phi + Re lambda.
inline CoveredMap c_element(Complex lambda) {
    const Mat2 m = Mat2::complex_mult(std::exp(Complex(0.0, pi) * lambda));
    return {m, detail::lift_index_for(m, lambda.real())};
}

/// sup over phi of |f(phi) - phi|: 4096 samples on [0, 2) then golden-section
/// refinement around the best sample. f - id has period 1, but the full
/// period 2 of the circle is scanned to match the contract.
inline double sup_displacement(const CoveredMap& g, int samples = 4096) {
    auto gap = [&](double phi) { return std::abs(lift_eval(g, phi) - phi); };
    const double step = 2.0 / samples;
    double best_phi = 0.0;
    double best = gap(0.0);
    for (int i = 1; i < samples; ++i) {
        const double phi = step * i;
        const double v = gap(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    constexpr double inv_golden = 0.6180339887498949;
    double lo = best_phi - step, hi = best_phi + step;
    double x1 = hi - inv_golden * (hi - lo), x2 = lo + inv_golden * (hi - lo);
    double f1 = gap(x1), f2 = gap(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_golden * (hi - lo);
            f1 = gap(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_golden * (hi - lo);
            f2 = gap(x2);
        }
    }
    return std::max({best, f1, f2});
}

enum class DiagonalForm { expanding_first, contracting_first };

/// A = h D h^{-1} with det h > 0, where D = diag(r, 1/r) (expanding_first)
/// or diag(1/r, r) (contracting_first) and |r| > 1.
struct HyperbolicDiagonalization {
    Mat2 h;
    double r = 0.0;
    DiagonalForm form = DiagonalForm::expanding_first;

    Mat2 diagonal() const {
        return form == DiagonalForm::expanding_first ? Mat2::diag(r, 1.0 / r) : Mat2::diag(1.0 / r, r);
    }
    Mat2 reconstruct() const { return h * diagonal() * h.inverse(); }
};

namespace detail {

inline Vec2 unit_eigenvector(const Mat2& m, double lambda) {
    const Vec2 u{m.b, lambda - m.a};
    const Vec2 v{lambda - m.d, m.c};
    Vec2 w = norm(u) >= norm(v) ? u : v;
    const double n = norm(w);
    w = {w[0] / n, w[1] / n};
    if (std::abs(w[0]) >= std::abs(w[1]) ? w[0] < 0.0 : w[1] < 0.0) w = {-w[0], -w[1]};
    return w;
}

}  // namespace detail

inline HyperbolicDiagonalization diagonalize_hyperbolic(const Mat2& m) {
    if (std::abs(m.det() - 1.0) > 1e-9) throw NotUnimodular("diagonalize_hyperbolic requires det = 1");
    if (!(std::abs(m.trace()) > 2.0)) throw NotHyperbolic("|trace| <= 2");
    const auto [big, small] = eigen_pair(m);
    const double r = big.real();
    const Vec2 vb = detail::unit_eigenvector(m, r);
    const Vec2 vs = detail::unit_eigenvector(m, small.real());
    HyperbolicDiagonalization out;
    out.r = r;
    const double orient = vb[0] * vs[1] - vb[1] * vs[0];
    if (orient > 0.0) {
        out.h = {vb[0], vs[0], vb[1], vs[1]};
        out.form = DiagonalForm::expanding_first;
    } else {
        out.h = {vs[0], vb[0], vs[1], vb[1]};
        out.form = DiagonalForm::contracting_first;
    }
    return out;
}

}  // namespace stabmetric
