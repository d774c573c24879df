#pragma once

// Autoequivalences of the derived category of an elliptic curve, seen through
// their action on the numerical lattice Z^2 = <[O_E], [O_x]> as SL(2,Z).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stabmetric/common.hpp"
#include "stabmetric/lin2.hpp"
#include "stabmetric/quotient.hpp"

namespace stabmetric {

/// Integer matrix [[a, b], [c, d]] with determinant exactly 1.
struct Autoeq {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    Autoeq() = default;
    Autoeq(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_) : a(a_), b(b_), c(c_), d(d_) {
        if (a * d - b * c != 1) throw NotUnimodular("autoequivalence matrix must have determinant 1");
    }

    std::int64_t trace() const { return a + d; }
    Mat2 as_mat2() const {
        return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c), static_cast<double>(d)};
    }
    Autoeq operator*(const Autoeq& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Autoeq inverse() const { return {d, -b, -c, a}; }

    bool operator==(const Autoeq&) const = default;
};

enum class MobiusType { elliptic, parabolic, hyperbolic };

inline const char* to_string(MobiusType t) {
    switch (t) {
        case MobiusType::elliptic: return "elliptic";
        case MobiusType::parabolic: return "parabolic";
        case MobiusType::hyperbolic: return "hyperbolic";
    }
    return "?";
}

inline MobiusType mobius_type(std::int64_t trace) {
    const auto t = trace < 0 ? -trace : trace;
    if (t > 2) return MobiusType::hyperbolic;
    if (t == 2) return MobiusType::parabolic;
    return MobiusType::elliptic;
}

struct PaClassification {
    bool pseudo_anosov = false;
    std::int64_t trace = 0;
    MobiusType type = MobiusType::elliptic;
    std::string reason;
};

inline PaClassification pa_classify(const Autoeq& f) {
    PaClassification out;
    out.trace = f.trace();
    out.type = mobius_type(out.trace);
    out.pseudo_anosov = out.type == MobiusType::hyperbolic;
    out.reason = "trace " + std::to_string(out.trace) + (out.pseudo_anosov ? ": |trace| > 2" : ": |trace| <= 2");
    return out;
}

/// Spectral radius (|tr| + sqrt(tr^2 - 4)) / 2 of a pseudo-Anosov class.
inline double stretch_factor(const Autoeq& f) {
    if (!pa_classify(f).pseudo_anosov) throw NotPseudoAnosov("stretch factor needs |trace| > 2");
    const double t = std::abs(static_cast<double>(f.trace()));
    return 0.5 * (t + std::sqrt(t * t - 4.0));
}

/// Translation length on the C-quotient of the stability space.
inline double translation_length(const Autoeq& f) { return std::log(stretch_factor(f)); }

/// Entropy from the closed forms: log(stretch factor) for pseudo-Anosov
/// classes and 0 otherwise. No generator towers are computed.
inline double entropy_value(const Autoeq& f) {
    return pa_classify(f).pseudo_anosov ? std::log(stretch_factor(f)) : 0.0;
}

// ---------------------------------------------------------------- mass growth

/// Central charges Z(A_i) of the semistable factors of a split generator.
struct MassSeed {
    std::vector<Vec2> charges;

    void validate() const {
        if (charges.empty()) throw InvalidInput("mass seed needs at least one charge");
        for (const auto& z : charges)
            if (z[0] == 0.0 && z[1] == 0.0) throw InvalidInput("mass seed charges must be nonzero");
    }
};

struct MassGrowth {
    std::vector<double> rates;  // rates[k-1] = (1/k) log sum_i |M^k z_i|
    bool decaying_seed = false;  // total mass fell at each of the first 10 steps
};

/// Iterates every charge with renormalization, accumulating log-scales so
/// that rho^n never has to be represented.
inline MassGrowth mass_growth_estimate(const Mat2& m, const MassSeed& seed, int n) {
    seed.validate();
    if (n < 1) throw InvalidInput("mass growth needs n >= 1");
    std::vector<Vec2> dir;
    std::vector<double> log_scale;
    for (const auto& z : seed.charges) {
        const double r = norm(z);
        dir.push_back({z[0] / r, z[1] / r});
        log_scale.push_back(std::log(r));
    }
    auto log_total = [&] {
        const double top = *std::max_element(log_scale.begin(), log_scale.end());
        double s = 0.0;
        for (double l : log_scale) s += std::exp(l - top);
        return top + std::log(s);
    };
    MassGrowth out;
    double previous = log_total();
    int decays = 0;
    for (int k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < dir.size(); ++i) {
            const Vec2 v = m * dir[i];
            const double r = norm(v);
            dir[i] = {v[0] / r, v[1] / r};
            log_scale[i] += std::log(r);
        }
        const double now = log_total();
        if (k <= 10 && now < previous) ++decays;
        previous = now;
        out.rates.push_back(now / k);
    }
    out.decaying_seed = n >= 10 && decays == 10;
    return out;
}

// ---------------------------------------------------------------- upper half-plane

/// Point of the upper half-plane.
struct HPoint {
    Complex z;

    explicit HPoint(Complex value) : z(value) {
        if (!(value.imag() > 0.0)) throw InvalidInput("upper half-plane point needs Im z > 0");
    }
};

/// Distance of (dx^2 + dy^2) / (4 y^2): half the curvature -1 distance,
/// written as asinh(|z - w| / (2 sqrt(Im z Im w))) to stay accurate near the diagonal.
inline double poincare_distance(const HPoint& z, const HPoint& w) {
    return std::asinh(std::abs(z.z - w.z) / (2.0 * std::sqrt(z.z.imag() * w.z.imag())));
}

inline double poincare_distance(Complex z, Complex w) { return poincare_distance(HPoint(z), HPoint(w)); }

/// Im(Az) = det(A) Im z / |cz + d|^2 is used directly so far-out orbit points keep a positive height.
inline Complex mobius(const Mat2& m, Complex z) {
    const Complex den = m.c * z + m.d;
    const Complex w = (m.a * z + m.b) / den;
    return {w.real(), m.det() * z.imag() / std::norm(den)};
}

/// Half-plane coordinate of sigma_0.g with phi(g) = M: the charges of O_x and
/// O_E after M^{-1}, and z = Z(O_x) / Z(O_E). The identity maps to i.
inline HPoint h_coordinate(const Mat2& m) {
    if (!(m.det() > 0.0)) throw NonPositiveDeterminant("h_coordinate requires det M > 0");
    const Mat2 inv = m.inverse();
    const Vec2 we = inv * Vec2{0.0, 1.0};
    const Vec2 wx = inv * Vec2{-1.0, 0.0};
    const Complex z = Complex(wx[0], wx[1]) / Complex(we[0], we[1]);
    if (!(z.imag() > 0.0)) throw InvalidInput("h_coordinate produced a point outside the upper half-plane");
    return HPoint(z);
}

struct PoincareTranslation {
    double length = 0.0;
    MobiusType type = MobiusType::elliptic;
};

inline PoincareTranslation poincare_translation_length(const Autoeq& f) {
    const MobiusType t = mobius_type(f.trace());
    if (t != MobiusType::hyperbolic) return {0.0, t};
    return {std::acosh(std::abs(static_cast<double>(f.trace())) / 2.0), t};
}

/// Highest point of the geodesic joining the two real fixed points of a
/// hyperbolic Moebius map (fixed points solve c z^2 + (d - a) z - b = 0).
inline Complex axis_point(const Mat2& m) {
    const double tr = m.trace();
    if (!(std::abs(tr) > 2.0)) throw NotHyperbolic("axis_point needs |trace| > 2");
    if (m.c == 0.0) return {m.b / (m.d - m.a), 1.0};
    const double centre = (m.a - m.d) / (2.0 * m.c);
    const double radius = std::sqrt(tr * tr - 4.0 * m.det()) / (2.0 * std::abs(m.c));
    return {centre, radius};
}

/// min of d_P(z, A z) over a grid of z around the axis of A: real parts
/// within 4 axis radii of the centre, heights log-spaced over e^{-3}..e^{3}
/// times the radius.
inline double min_displacement_on_grid(const Mat2& m, int points = 201) {
    const Complex top = axis_point(m);
    const double radius = top.imag();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double re = top.real() - 4.0 * radius + 8.0 * radius * i / (points - 1);
        for (int j = 0; j < points; ++j) {
            const double im = radius * std::exp(-3.0 + 6.0 * j / (points - 1));
            const Complex z(re, im);
            best = std::min(best, poincare_distance(z, mobius(m, z)));
        }
    }
    return best;
}

/// (1/n) d_P(z, A^n z): the quotient displacement rate along the orbit of z.
inline double displacement_rate(const Mat2& m, int n, Complex z) {
    Complex w = z;
    for (int k = 0; k < n; ++k) w = mobius(m, w);
    return poincare_distance(z, w) / n;
}

// ---------------------------------------------------------------- GL~ bounds

/// max{ |f - id|_sup, log |M|, log |M^{-1}| }: an upper bound for d_B(sigma, sigma.g).
inline double upper_bound_dbar(const CoveredMap& g) {
    return std::max({sup_displacement(g), std::log(operator_norm(g.matrix)),
                     std::log(operator_norm(g.matrix.inverse()))});
}

/// inf over lambda of upper_bound_dbar(g o lambda), by box search over |Re|, |Im| <= 1.
inline double inf_upper_bound_over_c(const CoveredMap& g, const SolverParams& params = {9, 1e-7, 200}) {
    auto objective = [&](Complex lambda) { return upper_bound_dbar(compose(g, c_element(lambda))); };
    return minimize_box(objective, Complex(0.0, 0.0), 1.0, params).value;
}

/// The stability-side matrix phi(g~) = J N(F) J^{-1}, J = [[0,-1],[1,0]] the
/// matrix of Z_0.
inline Mat2 stability_matrix(const Autoeq& f) {
    const Mat2 j{0.0, -1.0, 1.0, 0.0};
    return j * f.as_mat2() * j.inverse();
}

/// sigma_F = sigma_0.h and the diagonal element g_F = (D, base lift) with
/// F.sigma_F = sigma_F.g_F.
struct PseudoAnosovData {
    HyperbolicDiagonalization diagonalization;
    CoveredMap g_f;
    double stretch = 0.0;
};

inline PseudoAnosovData pseudo_anosov_data(const Autoeq& f) {
    if (!pa_classify(f).pseudo_anosov) throw NotPseudoAnosov("not pseudo-Anosov: |trace| <= 2");
    PseudoAnosovData out;
    out.diagonalization = diagonalize_hyperbolic(stability_matrix(f));
    out.g_f = CoveredMap(out.diagonalization.diagonal(), 0);
    out.stretch = std::abs(out.diagonalization.r);
    return out;
}

// ---------------------------------------------------------------- curves

struct CurveSummary {
    std::int64_t genus = 0;
    bool pseudo_anosov_possible = false;
    std::optional<PaClassification> classification;
    std::optional<double> stretch;
    std::optional<double> translation;
    std::optional<double> entropy;
    std::string note;
};

inline CurveSummary curve_pa_summary(std::int64_t genus, const std::optional<Autoeq>& f) {
    if (genus < 0) throw InvalidInput("genus must be nonnegative");
    CurveSummary out;
    out.genus = genus;
    if (genus != 1) {
        out.note = "no pseudo-Anosov autoequivalences exist (entropy of every autoequivalence vanishes)";
        return out;
    }
    if (!f) throw MissingMatrix("genus 1 requires the induced SL(2,Z) matrix");
    out.pseudo_anosov_possible = true;
    out.classification = pa_classify(*f);
    out.entropy = entropy_value(*f);
    if (out.classification->pseudo_anosov) {
        out.stretch = stretch_factor(*f);
        out.translation = translation_length(*f);
        out.note = "pseudo-Anosov; entropy = log stretch factor = translation length (closed form)";
    } else {
        out.note = "not pseudo-Anosov; entropy 0 (closed form)";
    }
    return out;
}

struct TableEntry {
    Autoeq matrix;
    MobiusType expected;
};

/// Twenty SL(2,Z) matrices labelled by hand: 9 hyperbolic, 6 parabolic, 5 elliptic.
inline std::vector<TableEntry> builtin_sl2z_table() {
    using M = MobiusType;
    return {
        {{2, 1, 1, 1}, M::hyperbolic},    {{3, 1, 2, 1}, M::hyperbolic},   {{1, 1, 1, 2}, M::hyperbolic},
        {{5, 2, 2, 1}, M::hyperbolic},    {{2, 3, 1, 2}, M::hyperbolic},   {{-2, -1, -1, -1}, M::hyperbolic},
        {{0, 1, -1, 3}, M::hyperbolic},   {{4, 1, 3, 1}, M::hyperbolic},   {{-3, 1, -1, 0}, M::hyperbolic},
        {{1, 1, 0, 1}, M::parabolic},     {{1, 0, 1, 1}, M::parabolic},    {{-1, 1, 0, -1}, M::parabolic},
        {{1, 0, 0, 1}, M::parabolic},     {{-1, 0, 0, -1}, M::parabolic},  {{3, -4, 1, -1}, M::parabolic},
        {{0, -1, 1, 0}, M::elliptic},     {{1, -1, 1, 0}, M::elliptic},    {{0, -1, 1, 1}, M::elliptic},
        {{-1, -1, 1, 0}, M::elliptic},    {{2, -3, 1, -1}, M::elliptic},
    };
}

/// Random integer matrix in SL(2,Z) with |trace| > 2, entries in [-range, range].
inline Autoeq random_hyperbolic(Rng& rng, std::int64_t range = 20) {
    for (;;) {
        const auto a = rng.integer(-range, range), b = rng.integer(-range, range), c = rng.integer(-range, range);
        // solve a d - b c = 1 for d when a divides 1 + b c
        if (a == 0) continue;
        if ((1 + b * c) % a != 0) continue;
        const auto d = (1 + b * c) / a;
        if (d < -range || d > range) continue;
        const Autoeq f(a, b, c, d);
        if (pa_classify(f).pseudo_anosov) return f;
    }
}

}  // namespace stabmetric
