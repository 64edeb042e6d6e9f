#include "knotfield/biot_savart.hpp"
#include "knotfield/errors.hpp"
#include "knotfield/quadrature.hpp"
#include "knotfield/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace knotfield;

namespace {

void expect_near(const Vec3& a, const Vec3& b, double tol) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

}  // namespace

TEST(Quadrature, PolynomialAndSmooth) {
    const auto cubic = integrate_adaptive<double>([](double x) { return x * x * x; }, 0.0, 2.0,
                                                  QuadratureOptions{});
    EXPECT_NEAR(cubic.value, 4.0, 1e-14);
    const auto peak = integrate_adaptive<double>(
        [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, QuadratureOptions{1e-10});
    EXPECT_NEAR(peak.value, 2.0 / 1e-2 * std::atan(1.0 / 1e-2), 1e-8);
    EXPECT_GT(peak.evaluations, 100);
}

TEST(Quadrature, Errors) {
    auto f = [](double x) { return x; };
    EXPECT_THROW(integrate_adaptive<double>(f, 1.0, 1.0, QuadratureOptions{}), QuadratureError);
    auto singular = [](double x) { return 1.0 / std::sqrt(std::fabs(x)); };
    EXPECT_THROW(integrate_adaptive<double>(singular, -1.0, 1.0, QuadratureOptions{1e-14, 8, 2}),
                 QuadratureError);
}

TEST(SegmentField, BroadsideUnitSegment) {
    const Segment s({0, 0, -1}, {0, 0, 1}, 1);
    expect_near(segment_field(s, {1, 0, 0}, 1.0), {0, std::sqrt(2.0), 0}, 1e-15);
    expect_near(segment_field_quadrature(s, {1, 0, 0}, 1.0, 1e-12), {0, std::sqrt(2.0), 0}, 1e-11);
}

TEST(SegmentField, ReversedCurrentFlips) {
    const Segment s({0, 0, 1}, {0, 0, -1}, 1);
    expect_near(segment_field(s, {1, 0, 0}, 1.0), {0, -std::sqrt(2.0), 0}, 1e-15);
}

TEST(SegmentField, InfiniteWireLimit) {
    const std::int64_t L = 1000000;
    const Segment s({0, 0, -L}, {0, 0, L}, 1);
    const FieldVector b = segment_field(s, {1, 0, 0}, 1.0);
    EXPECT_NEAR(b.y, 2.0, 1e-9 * 2.0);
    EXPECT_EQ(b.x, 0.0);
    EXPECT_EQ(b.z, 0.0);
}

TEST(SegmentField, AxisExtensionIsZero) {
    const Segment s({0, 0, 0}, {0, 0, 2}, 1);
    EXPECT_EQ(segment_field(s, {0, 0, 5}, 1.0), (Vec3{0, 0, 0}));
    EXPECT_EQ(segment_field(s, {0, 0, -3}, 1.0), (Vec3{0, 0, 0}));
}

TEST(SegmentField, BeyondEndMatchesQuadrature) {
    // Far past the end along the axis the broadside cosines cancel; the stable
    // form must still agree with direct integration.
    const Segment s({0, 0, 0}, {0, 0, 2}, 1);
    for (const Vec3& p : {Vec3{0.5, 0, 40}, Vec3{1e-3, 2e-3, 1e3}, Vec3{0.7, -0.2, -25}}) {
        const FieldVector exact = segment_field(s, p, 1.0);
        const FieldVector quad = segment_field_quadrature(s, p, 1.0, 1e-16);
        expect_near(exact, quad, 1e-14 + 1e-9 * norm(quad));
    }
}

TEST(SegmentField, OnConductor) {
    const Segment s({0, 0, 0}, {2, 0, 0}, 7);
    try {
        segment_field(s, {1, 0, 0}, 1.0);
        FAIL() << "expected OnConductorError";
    } catch (const OnConductorError& e) {
        EXPECT_EQ(e.segment_index(), 7u);
    }
    EXPECT_THROW(segment_field(s, {2.0, 5e-7, 0}, 1.0), OnConductorError);
    EXPECT_NO_THROW(segment_field(s, {2.0, 5e-7, 0}, 1.0, 1e-7));
    EXPECT_THROW(segment_field_quadrature(s, {0.5, 0, 0}, 1.0, 1e-10), OnConductorError);
}

TEST(SegmentField, FrameInvariants) {
    const Segment s({1, 2, 3}, {1, 2, 7}, 1);
    const auto f = segment_frame(s, {4, 6, 5});
    EXPECT_DOUBLE_EQ(f.distance, 5.0);
    EXPECT_NEAR(dot(f.azimuth, f.axis), 0.0, 1e-15);
    EXPECT_NEAR(dot(f.azimuth, f.offset), 0.0, 1e-15);
    EXPECT_NEAR(norm(f.azimuth), 1.0, 1e-15);
    EXPECT_EQ(f.azimuth.z, 0.0);
    EXPECT_NEAR(f.cos_theta1, 2.0 / std::sqrt(29.0), 1e-15);
    EXPECT_NEAR(f.cos_theta2, 2.0 / std::sqrt(29.0), 1e-15);
}

TEST(Gamma, PrintedZExample) {
    const Segment s({0, 0, -1}, {0, 0, 1}, 1);
    const double x = 0.6;
    const double y = -1.7;
    const double r = std::hypot(x, y);
    expect_near(gamma_weights(s, {x, y, 0.3}), {-y / r, x / r, 0.0}, 1e-15);
    const Segment rev({0, 0, 1}, {0, 0, -1}, 1);
    expect_near(gamma_weights(rev, {x, y, 0.3}), {y / r, -x / r, 0.0}, 1e-15);
}

TEST(Gamma, XSegment) {
    const Segment s({-1, 0, 0}, {1, 0, 0}, 1);
    expect_near(gamma_weights(s, {0.2, 3.0, 0}), {0, 0, 1}, 1e-15);
    EXPECT_THROW(gamma_weights(s, {5.0, 0, 0}), std::domain_error);
}

TEST(TotalField, SquareCenter) {
    const LatticeKnot sq({{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}}, "square");
    const FieldVector b = total_field(sq, {0, 0, 0});
    EXPECT_NEAR(b.z, 4.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(b.x, 0.0, 1e-15);
    EXPECT_NEAR(b.y, 0.0, 1e-15);
}

TEST(TotalField, TrefoilPointMatchesQuadratureSum) {
    const LatticeKnot t = canonical_trefoil();
    const Vec3 p{5, 3, 2};
    FieldVector sum;
    for (const auto& s : segments(t)) {
        sum += segment_field_quadrature(s, p, 1.0, 1e-12);
    }
    const FieldVector b = total_field(t, p);
    expect_near(b, sum, 1e-8);
    // Frozen regression value at (5,3,2).
    expect_near(b, {-1.6988128658130028, 2.2448596504536518, 0.80855039202429657}, 1e-13);
}

TEST(TotalField, OnConductorNamesSegment) {
    const LatticeKnot t = canonical_trefoil();
    try {
        total_field(t, {6, 4, 2});
        FAIL() << "expected OnConductorError";
    } catch (const OnConductorError& e) {
        EXPECT_EQ(e.segment_index(), 10u);
    }
}

TEST(TotalField, LinearInPrefactorAndAntisymmetricInOrientation) {
    const LatticeKnot f = canonical_figure_eight();
    const KnotField one(f);
    const KnotField two(f.with_prefactor(2.0));
    const KnotField rev(f.reversed());
    for (const auto& p : random_complement_points(f, 50, 3, 0.5)) {
        const FieldVector b = one.at(p);
        EXPECT_EQ(two.at(p), b * 2.0);
        expect_near(rev.at(p), -b, 1e-14 * (1.0 + norm(b)));
    }
}

TEST(TotalField, FarFieldDecaysLikeDipole) {
    const LatticeKnot t = canonical_trefoil();
    const Vec3 dir = Vec3{0.3, -0.5, 0.81} / norm(Vec3{0.3, -0.5, 0.81});
    const double r1 = 1000.0;
    const double r2 = 10000.0;
    const double b1 = norm(total_field(t, dir * r1));
    const double b2 = norm(total_field(t, dir * r2));
    const double exponent = std::log10(b1 / b2);
    EXPECT_GE(exponent, 2.0);
    EXPECT_NEAR(exponent, 3.0, 0.05);
}

TEST(TotalField, ScalingLaw) {
    const LatticeKnot t = canonical_trefoil();
    for (unsigned m : {2u, 3u, 5u}) {
        const KnotField a(t);
        const KnotField b(refine(t, m));
        for (const auto& p : random_complement_points(t, 20, m, 0.5)) {
            const FieldVector ba = a.at(p);
            const FieldVector bb = b.at(p * static_cast<double>(m));
            EXPECT_LE(norm(bb * static_cast<double>(m) - ba), 1e-9 * norm(ba));
        }
    }
}

TEST(KnotField, ContributionsSumToTotal) {
    const KnotField f(canonical_figure_eight());
    const Vec3 p{3.3, 5.1, 1.2};
    FieldVector sum;
    for (const auto& c : f.contributions(p)) {
        sum += c;
    }
    EXPECT_EQ(sum, f.at(p));
    EXPECT_EQ(f.contributions(p).size(), 14u);
    EXPECT_NEAR(f.clearance({3, 5, 2}), 1.0, 1e-15);
}
