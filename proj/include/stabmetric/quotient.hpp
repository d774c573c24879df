#pragma once

// The R^4 model with the l-infinity metric, its C-action, the quotient metric
// on R^4/C, and the embedding of the region C.C into Kronecker stability
// conditions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "stabmetric/common.hpp"
#include "stabmetric/stabmodel.hpp"

namespace stabmetric {

/// x.lambda = x + (Re, Im, Re, Im).
inline R4 act_r4(const R4& x, Complex lambda) {
    return {x[0] + lambda.real(), x[1] + lambda.imag(), x[2] + lambda.real(), x[3] + lambda.imag()};
}

inline double dprime(const R4& x, const R4& y) {
    double m = 0.0;
    for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(x[j] - y[j]));
    return m;
}

/// Class in R^4/C, stored by its representative with x1 = x2 = 0.
class QuotPoint {
public:
    QuotPoint() = default;
    explicit QuotPoint(const R4& any_rep) : rep_{0.0, 0.0, any_rep[2] - any_rep[0], any_rep[3] - any_rep[1]} {}

    const R4& rep() const { return rep_; }

    bool operator==(const QuotPoint&) const = default;

private:
    R4 rep_{};
};

inline double quot_dist_closed(const R4& x, const R4& y) {
    const double d1 = y[0] - x[0], d2 = y[1] - x[1], d3 = y[2] - x[2], d4 = y[3] - x[3];
    return std::max(std::abs(d1 - d3) / 2.0, std::abs(d2 - d4) / 2.0);
}

inline double quot_dist_closed(const QuotPoint& x, const QuotPoint& y) { return quot_dist_closed(x.rep(), y.rep()); }

/// lambda with dprime(x.lambda, y) equal to the quotient distance.
inline Complex quotient_minimizer(const R4& x, const R4& y) {
    const double d1 = y[0] - x[0], d2 = y[1] - x[1], d3 = y[2] - x[2], d4 = y[3] - x[3];
    return {(d1 + d3) / 2.0, (d2 + d4) / 2.0};
}

struct SolverParams {
    int grid = 33;
    double tol = 1e-9;
    int max_iter = 200;
};

struct BoxMinimum {
    Complex argmin;
    double value = 0.0;
    int iterations = 0;
};

/// Minimizes a convex function of lambda over the square centred at
/// `center` with half-width `half_width`: a full grid is evaluated, the box
/// is recentred on the best node and halved, until the half-width drops
/// below params.tol.
template <class Objective>
BoxMinimum minimize_box(Objective&& objective, Complex center, double half_width, const SolverParams& params) {
    if (params.grid < 3) throw InvalidInput("solver grid must be >= 3");
    BoxMinimum best{center, objective(center), 0};
    if (!std::isfinite(best.value)) throw SolverDiverged("objective not finite at the starting point");
    double w = half_width;
    const int n = params.grid;
    for (int it = 1; it <= params.max_iter; ++it) {
        const Complex c = best.argmin;
        for (int i = 0; i < n; ++i) {
            const double u = c.real() - w + 2.0 * w * i / (n - 1);
            for (int j = 0; j < n; ++j) {
                const double v = c.imag() - w + 2.0 * w * j / (n - 1);
                const double f = objective(Complex(u, v));
                if (!std::isfinite(f)) throw SolverDiverged("objective not finite during search");
                if (f < best.value) best = {Complex(u, v), f, it};
            }
        }
        best.iterations = it;
        w *= 0.5;
        if (w < params.tol) return best;
    }
    throw SolverDiverged("box search did not shrink below tolerance within max_iter");
}

/// inf over lambda of dist(sigma, act(tau, lambda)). The objective must be a
/// maximum of finitely many absolute affine functions of (Re, Im) lambda.
/// The minimizer lies within dist(sigma, tau) of 0, so the search box has
/// half-width dist(sigma, tau) + 1.
template <class Point, class Dist, class Act>
double quot_dist_inf(Dist&& dist, const Point& sigma, const Point& tau, Act&& act, const SolverParams& params = {}) {
    const double base = dist(sigma, tau);
    auto objective = [&](Complex lambda) { return dist(sigma, act(tau, lambda)); };
    const BoxMinimum m = minimize_box(objective, Complex(0.0, 0.0), base + 1.0, params);
    if (m.value > base + params.tol) throw SolverDiverged("descent ended above the starting value");
    return m.value;
}

/// Identity on coordinates, from R^4 into Kronecker stability conditions.
inline KroneckerPoint embed_q(const R4& x, int arrows = 3) {
    KroneckerPoint p(x, arrows);
    p.validate();
    return p;
}

/// Quotient distance between Kronecker points, evaluated at the explicit
/// minimizing C-element (the pi factor converts log-modulus offsets into Im lambda).
inline double kronecker_quot_dist(const KroneckerPoint& p, const KroneckerPoint& q) {
    const Complex lam = quotient_minimizer(q.x, p.x);
    return d_B_closed(p, c_act(q, Complex(lam.real(), lam.imag() / pi)));
}

/// Same quantity through the numerical solver.
inline double kronecker_quot_dist_inf(const KroneckerPoint& p, const KroneckerPoint& q, const SolverParams& params) {
    return quot_dist_inf([](const KroneckerPoint& a, const KroneckerPoint& b) { return d_B_closed(a, b); }, p, q,
                         [](const KroneckerPoint& a, Complex lam) { return c_act(a, lam); }, params);
}

/// Random point of C.C: x1 in [-2, 2], x3 - x1 in (0, 1), log-moduli in [-2, 2].
inline R4 random_region_point(Rng& rng) {
    const double x1 = rng.uniform(-2.0, 2.0);
    return {x1, rng.uniform(-2.0, 2.0), x1 + rng.uniform_open(), rng.uniform(-2.0, 2.0)};
}

struct IsometryReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> embed_deviation;     // |d_B(q x, q y) - d'(x, y)|
    std::vector<double> quotient_deviation;  // |quot_dist_closed - solver quotient distance on q x, q y|

    double max_embed_deviation() const {
        return embed_deviation.empty() ? 0.0 : *std::max_element(embed_deviation.begin(), embed_deviation.end());
    }
    double max_quotient_deviation() const {
        return quotient_deviation.empty() ? 0.0
                                          : *std::max_element(quotient_deviation.begin(), quotient_deviation.end());
    }
};

/// Tight solver settings used when a quotient distance is compared at 1e-12.
inline SolverParams precise_solver() { return {33, 1e-15, 200}; }

inline IsometryReport isometry_report(std::size_t n, std::uint64_t seed, const SolverParams& params = precise_solver()) {
    IsometryReport rep;
    rep.samples = n;
    rep.seed = seed;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const R4 x = random_region_point(rng);
        const R4 y = random_region_point(rng);
        const KroneckerPoint qx = embed_q(x), qy = embed_q(y);
        rep.embed_deviation.push_back(std::abs(d_B_closed(qx, qy) - dprime(x, y)));
        const double closed = quot_dist_closed(QuotPoint(x), QuotPoint(y));
        rep.quotient_deviation.push_back(std::abs(closed - kronecker_quot_dist_inf(qx, qy, params)));
    }
    return rep;
}

}  // namespace stabmetric
