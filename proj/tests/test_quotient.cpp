#include <gtest/gtest.h>

#include <cmath>

#include "stabmetric/quotient.hpp"

using namespace stabmetric;

namespace {

R4 random_r4(Rng& rng) { return {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}; }

// Independent quotient distance: the objective max_j |D_j - offset_j(lambda)|
// is minimized separately in Re and Im since the two groups of coordinates
// decouple, each by a dense 1-D ternary search.
double quotient_oracle(const R4& x, const R4& y) {
    auto one = [](double u, double v) {
        double lo = -10, hi = 10;
        auto f = [&](double s) { return std::max(std::abs(u - s), std::abs(v - s)); };
        for (int i = 0; i < 300; ++i) {
            const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (f(m1) < f(m2))
                hi = m2;
            else
                lo = m1;
        }
        return f((lo + hi) / 2);
    };
    return std::max(one(y[0] - x[0], y[2] - x[2]), one(y[1] - x[1], y[3] - x[3]));
}

double solver_dist(const R4& x, const R4& y, const SolverParams& p = {}) {
    return quot_dist_inf([](const R4& a, const R4& b) { return dprime(a, b); }, x, y,
                         [](const R4& a, Complex l) { return act_r4(a, l); }, p);
}

}  // namespace

TEST(Dprime, Examples) {
    EXPECT_EQ(dprime({0, 0, 0, 0}, {1, 2, -1, 0}), 2.0);
    EXPECT_EQ(dprime({0.3, 1, 2, 3}, {0.3, 1, 2, 3}), 0.0);
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const R4 x = random_r4(rng), y = random_r4(rng);
        const Complex l(rng.uniform(-5, 5), rng.uniform(-5, 5));
        EXPECT_NEAR(dprime(act_r4(x, l), act_r4(y, l)), dprime(x, y), 1e-12);
    }
}

TEST(QuotPoint, CanonicalRepresentative) {
    const QuotPoint q(R4{0.7, -0.2, 1.1, 0.4});
    EXPECT_EQ(q.rep()[0], 0.0);
    EXPECT_EQ(q.rep()[1], 0.0);
    EXPECT_NEAR(q.rep()[2], 0.4, 1e-15);
    EXPECT_NEAR(q.rep()[3], 0.6, 1e-15);
    EXPECT_EQ(QuotPoint(R4{0, 0, 1, 2}), QuotPoint(R4{3, 4, 4, 6}));
    EXPECT_FALSE(QuotPoint(R4{0, 0, 1, 2}) == QuotPoint(R4{0, 0, 1, 2.5}));
}

TEST(QuotDistClosed, Examples) {
    const QuotPoint p1(R4{0.2, 0, 0.4, 0}), p2(R4{0.2, 0, 0.6, 0.1}), p3(R4{0.2, 0, 0.8, 0});
    EXPECT_NEAR(quot_dist_closed(p1, p2), 0.1, 1e-15);
    EXPECT_NEAR(quot_dist_closed(p2, p3), 0.1, 1e-15);
    EXPECT_NEAR(quot_dist_closed(p1, p3), 0.2, 1e-15);
    EXPECT_NEAR(quot_dist_closed(p1, p3), quot_dist_closed(p1, p2) + quot_dist_closed(p2, p3), 1e-15);
    EXPECT_EQ(quot_dist_closed(p2, p2), 0.0);
    EXPECT_DOUBLE_EQ(quot_dist_closed(R4{0, 0, 0, 0}, R4{0, 0, 1, 0}), 0.5);
    EXPECT_NEAR(solver_dist({0, 0, 0, 0}, {0, 0, 1, 0}), 0.5, 1e-6);
}

TEST(QuotDistClosed, MatchesOracleAndSolver) {
    Rng rng(32);
    for (int i = 0; i < 100; ++i) {
        const R4 x = random_r4(rng), y = random_r4(rng);
        const double closed = quot_dist_closed(x, y);
        EXPECT_NEAR(closed, quotient_oracle(x, y), 1e-9);
        EXPECT_NEAR(solver_dist(x, y), closed, 1e-6);
        EXPECT_NEAR(solver_dist(x, y, precise_solver()), closed, 1e-12);
        EXPECT_NEAR(dprime(act_r4(x, quotient_minimizer(x, y)), y), closed, 1e-12);
    }
}

TEST(QuotDistClosed, OrbitInvariantMetric) {
    Rng rng(33);
    for (int i = 0; i < 1000; ++i) {
        const R4 a = random_r4(rng), b = random_r4(rng), c = random_r4(rng);
        const QuotPoint qa(a), qb(b), qc(c);
        EXPECT_EQ(quot_dist_closed(qa, qb), quot_dist_closed(qb, qa));
        EXPECT_LE(quot_dist_closed(qa, qc), quot_dist_closed(qa, qb) + quot_dist_closed(qb, qc) + 1e-12);
        EXPECT_EQ(quot_dist_closed(qa, qa), 0.0);
        EXPECT_GT(quot_dist_closed(qa, qb), 0.0);
        const Complex l(rng.uniform(-3, 3), rng.uniform(-3, 3));
        EXPECT_NEAR(quot_dist_closed(act_r4(a, l), b), quot_dist_closed(a, b), 1e-12);
        EXPECT_LE(quot_dist_closed(a, b), dprime(a, b) + 1e-15);
    }
}

TEST(QuotDistInf, SameOrbitIsZero) {
    const R4 x{0.1, 0.2, 0.5, -0.3};
    EXPECT_NEAR(solver_dist(x, act_r4(x, Complex(0.7, -1.3))), 0.0, 1e-8);
}

TEST(QuotDistInf, DivergesWhenBudgetTooSmall) {
    const SolverParams tiny{5, 1e-12, 3};
    EXPECT_THROW(solver_dist({0, 0, 0, 0}, {0, 0, 1, 0}, tiny), SolverDiverged);
    EXPECT_THROW(solver_dist({0, 0, 0, 0}, {0, 0, 1, 0}, SolverParams{2, 1e-9, 100}), InvalidInput);
}

TEST(QuotientGeodesics, StraightLineImages) {
    Rng rng(34);
    for (int i = 0; i < 100; ++i) {
        const R4 x = random_region_point(rng), y = random_region_point(rng);
        const double total = quot_dist_closed(x, y);
        auto at = [&](double t) {
            R4 r{};
            for (int j = 0; j < 4; ++j) r[j] = (1 - t) * x[j] + t * y[j];
            return r;
        };
        for (int k = 0; k < 10; ++k) {
            const double t = rng.uniform(), u = rng.uniform();
            EXPECT_NEAR(quot_dist_closed(QuotPoint(at(t)), QuotPoint(at(u))), std::abs(t - u) * total, 1e-12);
            EXPECT_TRUE(in_kronecker_region(at(t)));
        }
    }
}

TEST(EmbedQ, Examples) {
    const KroneckerPoint p = embed_q({0.5, 0, 1, 0});
    EXPECT_NEAR(std::abs(central_charge(p, {1, 0, 0}) - Complex(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(central_charge(p, {0, 1, 0}) - Complex(-1, 0)), 0.0, 1e-15);
    EXPECT_THROW(embed_q({0.5, 0, 0.3, 0}), OutsideRegion);
}

TEST(EmbedQ, IntertwinesActions) {
    Rng rng(35);
    for (int i = 0; i < 200; ++i) {
        const R4 x = random_region_point(rng);
        const Complex l(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const KroneckerPoint a = embed_q(act_r4(x, l));
        const KroneckerPoint b = c_act(embed_q(x), Complex(l.real(), l.imag() / pi));
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(a.x[j], b.x[j], 1e-12);
    }
}

TEST(EmbedQ, IsometryAndQuotientIsometry) {
    Rng rng(36);
    for (int i = 0; i < 200; ++i) {
        const R4 x = random_region_point(rng), y = random_region_point(rng);
        EXPECT_NEAR(d_B_closed(embed_q(x), embed_q(y)), dprime(x, y), 1e-12);
        EXPECT_NEAR(kronecker_quot_dist(embed_q(x), embed_q(y)), quot_dist_closed(x, y), 1e-12);
    }
}

TEST(IsometryReport, Examples) {
    const IsometryReport r = isometry_report(100, 7);
    EXPECT_EQ(r.samples, 100u);
    EXPECT_EQ(r.embed_deviation.size(), 100u);
    EXPECT_LE(r.max_embed_deviation(), 1e-12);
    EXPECT_LE(r.max_quotient_deviation(), 1e-12);

    const IsometryReport empty = isometry_report(0, 7);
    EXPECT_TRUE(empty.embed_deviation.empty());
    EXPECT_EQ(empty.max_embed_deviation(), 0.0);
    EXPECT_EQ(empty.max_quotient_deviation(), 0.0);

    const KroneckerPoint p = embed_q({0.1, 0.2, 0.6, 0.1});
    EXPECT_NEAR(kronecker_quot_dist_inf(p, c_act(p, Complex(0.4, 0.3)), precise_solver()), 0.0, 1e-12);
}

TEST(IsometryReport, Deterministic) {
    const IsometryReport a = isometry_report(50, 99), b = isometry_report(50, 99);
    EXPECT_EQ(a.embed_deviation, b.embed_deviation);
    EXPECT_EQ(a.quotient_deviation, b.quotient_deviation);
}
