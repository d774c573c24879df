#include <gtest/gtest.h>

#include <cmath>

#include "stabmetric/metriclab.hpp"

using namespace stabmetric;

namespace {

template <class Point>
void expect_self_verifying(const SpaceHandle<Point>& space, const TriangleCertificate<Point>& c) {
    EXPECT_NEAR(recheck(space, c), c.margin, 1e-12);
}

Planar random_planar(Rng& rng) { return {rng.uniform(-3, 3), rng.uniform(-3, 3)}; }

// Chord length of the unit quarter circle against its arc parameter.
double quarter_circle_oracle() {
    double worst = 0.0;
    for (int k = 0; k <= 1000000; ++k) {
        const double s = k / 1000000.0;
        worst = std::max(worst, std::abs(2.0 * std::sin(pi * s / 4.0) - std::sqrt(2.0) * s));
    }
    return worst;
}

}  // namespace

TEST(ComparisonTriangle, Examples) {
    const auto t = comparison_triangle(3, 4, 5);
    EXPECT_NEAR(t[1][0], 3.0, 1e-15);
    EXPECT_NEAR(t[2][0], 3.0, 1e-15);
    EXPECT_NEAR(t[2][1], 4.0, 1e-15);

    const auto d = comparison_triangle(2, 1, 1);
    EXPECT_NEAR(d[2][0], 1.0, 1e-15);
    EXPECT_NEAR(d[2][1], 0.0, 1e-15);

    const auto e = comparison_triangle(1, 1, 1);
    EXPECT_NEAR(e[2][0], 0.5, 1e-15);
    EXPECT_NEAR(e[2][1], std::sqrt(3.0) / 2.0, 1e-15);

    EXPECT_THROW(comparison_triangle(1, 1, 3), BadSideLengths);
    EXPECT_THROW(comparison_triangle(-1, 1, 1), BadSideLengths);
    EXPECT_THROW(comparison_triangle(0, 1, 2), BadSideLengths);
    EXPECT_NO_THROW(comparison_triangle(0, 1, 1));
}

TEST(ComparisonTriangle, ReproducesSideLengths) {
    Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        const Planar a = random_planar(rng), b = random_planar(rng), c = random_planar(rng);
        auto d = [](const Planar& p, const Planar& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); };
        const auto t = comparison_triangle(d(a, b), d(b, c), d(c, a));
        EXPECT_NEAR(d(t[0], t[1]), d(a, b), 1e-9);
        EXPECT_NEAR(d(t[1], t[2]), d(b, c), 1e-9);
        EXPECT_NEAR(d(t[2], t[0]), d(c, a), 1e-9);
        EXPECT_GE(t[2][1], 0.0);
    }
}

TEST(Cat0Check, COrbitExample) {
    const auto space = corbit_space();
    const auto cert = cat0_check(space, Complex(0, 0), Complex(2, 0), Complex(1, 1 / pi), 512, 1e-9, 5);
    ASSERT_TRUE(cert.has_value());
    EXPECT_EQ(cert->kind, CertificateKind::cat0_violation);
    EXPECT_NEAR(cert->margin, 1.0, 1e-9);
    EXPECT_EQ(cert->seed, 5u);
    EXPECT_EQ(cert->resolution, 512);
    expect_self_verifying(space, *cert);
}

TEST(Cat0Check, EuclideanPlanePasses) {
    const auto space = euclidean_plane();
    Rng rng(42);
    for (int i = 0; i < 100; ++i)
        EXPECT_FALSE(cat0_check(space, random_planar(rng), random_planar(rng), random_planar(rng), 48).has_value());
}

TEST(Cat0Check, QuotientFixtureViolates) {
    const auto space = quotient_space();
    const QuotPoint p1(R4{0.2, 0, 0.4, 0}), p2(R4{0.2, 0, 0.6, 0.1}), p3(R4{0.2, 0, 0.8, 0});
    const auto cert = cat0_check(space, p1, p2, p3);
    ASSERT_TRUE(cert.has_value());
    // The rounded side lengths make the comparison triangle nondegenerate at
    // height ~1e-9, which is what the margin loses.
    EXPECT_NEAR(cert->margin, 0.05, 1e-8);
    expect_self_verifying(space, *cert);
}

TEST(SlimCheck, FixtureAtUnitDelta) {
    const auto space = corbit_space();
    const auto cert = slim_check(space, Complex(0, 0), Complex(4, 0), Complex(0, 4 / pi), 1.0);
    ASSERT_TRUE(cert.has_value());
    EXPECT_EQ(cert->kind, CertificateKind::slim_violation);
    EXPECT_NEAR(cert->margin, 1.0, 1e-9);
    EXPECT_NEAR(std::abs(cert->witnesses[0] - Complex(2, 2 / pi)), 0.0, 1e-9);
    EXPECT_EQ(cert->witness_params[0].side, 1);
    expect_self_verifying(space, *cert);
}

TEST(SlimCheck, ScalesLinearly) {
    const auto space = corbit_space();
    for (double delta : {1.0, 2.0, 4.0, 8.0}) {
        const auto cert = slim_check(space, Complex(0, 0), Complex(4 * delta, 0), Complex(0, 4 * delta / pi), delta);
        ASSERT_TRUE(cert.has_value());
        EXPECT_NEAR(cert->margin, delta, 1e-9);
        expect_self_verifying(space, *cert);
        // the same triangle is 2 delta-slim
        EXPECT_FALSE(
            slim_check(space, Complex(0, 0), Complex(4 * delta, 0), Complex(0, 4 * delta / pi), 2 * delta + 1e-9));
    }
}

TEST(SlimCheck, EuclideanTrivialBounds) {
    const auto space = euclidean_plane();
    Rng rng(43);
    for (int i = 0; i < 50; ++i) {
        const Planar a{rng.uniform(0, 0.7), rng.uniform(0, 0.7)}, b{rng.uniform(0, 0.7), rng.uniform(0, 0.7)},
            c{rng.uniform(0, 0.7), rng.uniform(0, 0.7)};
        EXPECT_FALSE(slim_check(space, a, b, c, 1.0, 64).has_value());
        const Planar x = random_planar(rng), y = random_planar(rng), z = random_planar(rng);
        const double longest = std::max({space.dist(x, y), space.dist(y, z), space.dist(z, x)});
        EXPECT_FALSE(slim_check(space, x, y, z, longest, 64).has_value());
    }
}

TEST(NonuniqueGeodesic, COrbitExample) {
    const auto space = corbit_space();
    const Complex x(0, 0), y(0.2, 0), z(0.1, 0.1 / (2 * pi));
    EXPECT_NEAR(space.dist(x, z), 0.1, 1e-15);
    EXPECT_NEAR(space.dist(z, y), 0.1, 1e-15);
    EXPECT_NEAR(space.dist(x, y), 0.2, 1e-15);
    const auto res = nonunique_geodesic_check(space, x, z, y);
    const auto* cert = std::get_if<TriangleCertificate<Complex>>(&res);
    ASSERT_NE(cert, nullptr);
    EXPECT_LE(cert->parameter, 1e-12);
    EXPECT_GE(cert->margin, 0.2 / (4 * pi) - 1e-9);
    expect_self_verifying(space, *cert);
}

TEST(NonuniqueGeodesic, QuotientFixture) {
    const auto space = quotient_space();
    const auto res = nonunique_geodesic_check(space, QuotPoint(R4{0.2, 0, 0.4, 0}), QuotPoint(R4{0.2, 0, 0.6, 0.1}),
                                              QuotPoint(R4{0.2, 0, 0.8, 0}));
    const auto* cert = std::get_if<TriangleCertificate<QuotPoint>>(&res);
    ASSERT_NE(cert, nullptr);
    EXPECT_LE(cert->parameter, 1e-12);
    EXPECT_NEAR(cert->margin, 0.05, 1e-9);
    expect_self_verifying(space, *cert);
}

TEST(NonuniqueGeodesic, Rejections) {
    const auto space = euclidean_plane();
    const auto mid = nonunique_geodesic_check(space, Planar{0, 0}, Planar{1, 0}, Planar{2, 0});
    ASSERT_TRUE(std::holds_alternative<Rejection>(mid));
    EXPECT_EQ(std::get<Rejection>(mid).reason, RejectReason::on_geodesic);

    const auto off = nonunique_geodesic_check(space, Planar{0, 0}, Planar{1, 1}, Planar{2, 0});
    ASSERT_TRUE(std::holds_alternative<Rejection>(off));
    EXPECT_EQ(std::get<Rejection>(off).reason, RejectReason::not_additive);
    EXPECT_NEAR(std::get<Rejection>(off).value, 2 * std::sqrt(2.0) - 2, 1e-12);
}

TEST(NonuniqueGeodesic, EveryBallOnTheOrbit) {
    const auto space = corbit_space();
    for (double rp : {0.05, 0.25, 1.0}) {
        const double r = rp / 2;
        const auto res = nonunique_geodesic_check(space, Complex(0, 0), Complex(r / 2, r / (4 * pi)), Complex(r, 0));
        ASSERT_TRUE(std::holds_alternative<TriangleCertificate<Complex>>(res)) << rp;
        EXPECT_LT(space.dist(Complex(0, 0), Complex(r / 2, r / (4 * pi))), rp);
        EXPECT_LT(space.dist(Complex(0, 0), Complex(r, 0)), rp);
    }
}

TEST(GeodesicDeviation, Examples) {
    Rng rng(44);
    const auto corbit = corbit_space();
    const auto quot = quotient_space();
    for (int i = 0; i < 20; ++i) {
        EXPECT_LE(geodesic_deviation(corbit, Complex(rng.uniform(-3, 3), rng.uniform(-1, 1)),
                                     Complex(rng.uniform(-3, 3), rng.uniform(-1, 1))),
                  1e-12);
        EXPECT_LE(geodesic_deviation(quot, QuotPoint(random_region_point(rng)), QuotPoint(random_region_point(rng))),
                  1e-12);
    }
    const double dev = path_deviation<Planar>(
        [](const Planar& p, const Planar& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); },
        [](double t) { return Planar{std::cos(pi * t / 2), std::sin(pi * t / 2)}; }, 256);
    const double oracle = quarter_circle_oracle();
    EXPECT_GT(dev, 0.05);
    EXPECT_NEAR(dev, oracle, 1e-5);
}

TEST(SpaceHandles, MetricAxioms) {
    Rng rng(45);
    const auto kq = kronecker_quotient_space();
    const auto r4 = r4_space();
    for (int i = 0; i < 1000; ++i) {
        const KroneckerPoint a(random_region_point(rng)), b(random_region_point(rng)), c(random_region_point(rng));
        EXPECT_NEAR(kq.dist(a, b), kq.dist(b, a), 1e-12);
        EXPECT_LE(kq.dist(a, c), kq.dist(a, b) + kq.dist(b, c) + 1e-12);
        EXPECT_EQ(kq.dist(a, a), 0.0);
        EXPECT_NEAR(kq.dist(a, c_act(a, Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))), 0.0, 1e-12);
        EXPECT_GT(kq.dist(a, b), 0.0);
        EXPECT_EQ(r4.dist(a.x, b.x), r4.dist(b.x, a.x));
        EXPECT_LE(r4.dist(a.x, c.x), r4.dist(a.x, b.x) + r4.dist(b.x, c.x) + 1e-12);
        EXPECT_EQ(r4.dist(a.x, a.x), 0.0);
    }
}
