#pragma once

// Stability conditions on the l-Kronecker quiver in the orbit C.C of the
// region C = {0 < x1 < x3 <= 1}, and the C-orbit metric.
//
// Coordinates x in R^4 encode Z(S1) = exp(x2 + i pi x1), Z(S2) = exp(x4 + i pi x3):
// x1, x3 are phases (units of pi), x2, x4 are log-moduli.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stabmetric/common.hpp"

namespace stabmetric {

inline bool in_kronecker_region(const R4& x) {
    const double gap = x[2] - x[0];
    return gap > 0.0 && gap < 1.0;
}

struct KroneckerPoint {
    R4 x{};
    int l = 3;

    KroneckerPoint() = default;
    KroneckerPoint(const R4& coords, int arrows = 3) : x(coords), l(arrows) {
        if (arrows < 1) throw InvalidInput("Kronecker quiver needs at least one arrow");
    }

    /// Throws OutsideRegion unless 0 < x3 - x1 < 1.
    void validate() const {
        if (!in_kronecker_region(x))
            throw OutsideRegion("Kronecker point outside C.C: need 0 < x3 - x1 < 1, got x3 - x1 = " +
                                std::to_string(x[2] - x[0]));
    }
};

/// Class k1 [S1] + k2 [S2], shifted n times.
struct ObjectClass {
    std::uint64_t k1 = 0;
    std::uint64_t k2 = 0;
    std::int64_t shift = 0;

    void validate() const {
        if (k1 + k2 == 0) throw InvalidClass("object class must have k1 + k2 >= 1");
    }

    bool operator==(const ObjectClass&) const = default;
};

struct HNFactor {
    ObjectClass cls;
    double phase = 0.0;
    double mass_term = 0.0;
};

struct HNProfile {
    std::vector<HNFactor> factors;  // strictly decreasing phase
    double mass = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;

    bool semistable() const { return factors.size() == 1; }
};

inline Complex central_charge(const KroneckerPoint& p, const ObjectClass& c) {
    p.validate();
    const Complex z1 = std::exp(Complex(p.x[1], pi * p.x[0]));
    const Complex z2 = std::exp(Complex(p.x[3], pi * p.x[2]));
    const Complex z = static_cast<double>(c.k1) * z1 + static_cast<double>(c.k2) * z2;
    return (c.shift % 2 == 0) ? z : -z;
}

/// In C.C the phase of S2 exceeds that of S1 by less than 1, so every module
/// filters as S2^{k2} -> E -> S1^{k1}.
inline HNProfile hn_profile(const KroneckerPoint& p, const ObjectClass& c) {
    p.validate();
    c.validate();
    HNProfile out;
    const auto n = static_cast<double>(c.shift);
    if (c.k2 > 0) {
        out.factors.push_back({{0, c.k2, c.shift}, p.x[2] + n, static_cast<double>(c.k2) * std::exp(p.x[3])});
    }
    if (c.k1 > 0) {
        out.factors.push_back({{c.k1, 0, c.shift}, p.x[0] + n, static_cast<double>(c.k1) * std::exp(p.x[1])});
    }
    for (const auto& f : out.factors) out.mass += f.mass_term;
    out.phi_plus = out.factors.front().phase;
    out.phi_minus = out.factors.back().phase;
    return out;
}

/// Closed form of Bridgeland's metric on C.C: the l-infinity distance of coordinates.
inline double d_B_closed(const KroneckerPoint& p, const KroneckerPoint& q) {
    p.validate();
    q.validate();
    double m = 0.0;
    for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(p.x[j] - q.x[j]));
    return m;
}

/// Definitional supremum over all classes with k1, k2 <= max_mult, built from
/// HN profiles only. Shift 0 suffices since all terms are shift-invariant.
inline double d_B_sampled(const KroneckerPoint& p, const KroneckerPoint& q, std::uint64_t max_mult) {
    p.validate();
    q.validate();
    if (max_mult < 1) throw InvalidInput("d_B_sampled needs K >= 1");
    double sup = 0.0;
    for (std::uint64_t k1 = 0; k1 <= max_mult; ++k1) {
        for (std::uint64_t k2 = 0; k2 <= max_mult; ++k2) {
            if (k1 + k2 == 0) continue;
            const ObjectClass c{k1, k2, 0};
            const HNProfile hp = hn_profile(p, c);
            const HNProfile hq = hn_profile(q, c);
            sup = std::max({sup, std::abs(hp.phi_plus - hq.phi_plus), std::abs(hp.phi_minus - hq.phi_minus),
                            std::abs(std::log(hp.mass / hq.mass))});
        }
    }
    return sup;
}

/// Coordinate form of the C-action: Re lambda is added to both phases and
/// pi Im lambda to both log-moduli.
inline KroneckerPoint c_act(const KroneckerPoint& p, Complex lambda) {
    KroneckerPoint out = p;
    out.x[0] += lambda.real();
    out.x[2] += lambda.real();
    out.x[1] += pi * lambda.imag();
    out.x[3] += pi * lambda.imag();
    return out;
}

/// Smallest C with ||v(E)|| <= C |Z(E)| over semistable E. Semistable classes
/// are multiples of a single simple (up to shift), so this is max(e^{-x2}, e^{-x4}).
inline double support_constant(const KroneckerPoint& p) {
    p.validate();
    return std::max(std::exp(-p.x[1]), std::exp(-p.x[3]));
}

/// Point sigma.lambda on the C-orbit of a fixed stability condition.
struct COrbitPoint {
    Complex lambda;
};

/// Induced metric on a C-orbit.
inline double c_orbit_distance(Complex lambda, Complex mu) {
    const Complex diff = lambda - mu;
    return std::max(std::abs(diff.real()), pi * std::abs(diff.imag()));
}

inline double c_orbit_distance(const COrbitPoint& p, const COrbitPoint& q) {
    return c_orbit_distance(p.lambda, q.lambda);
}

}  // namespace stabmetric
