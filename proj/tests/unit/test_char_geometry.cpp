#include <gtest/gtest.h>

#include <cmath>

#include "horizonlab/char_geometry.hpp"

using namespace horizonlab;

namespace {

SpacetimeMetric vortex(double A, double B) { return acoustic_metric(vortex_flow(A, B, Domain::annulus(0.25 * std::abs(A), 10.0))); }

}  // namespace

TEST(CharGeometry, NullCovectorsAreNullAndForward) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const Point x = point2(0.0, 1.2);
    const NullDirectionPair p = spatial_null_covectors(m, x);
    const SpatialMatrix G = m.spatial_block(x);
    const MetricMatrix g = m(x);
    for (const Vec2& xi : {p.xi_plus, p.xi_minus}) {
        EXPECT_NEAR(xi.norm(), 1.0, 1e-14);
        EXPECT_NEAR(xi.dot(G * xi), 0.0, 1e-12);
        EXPECT_GE(g(0, 1) * xi.x() + g(0, 2) * xi.y(), 0.0);
    }
    EXPECT_GT(std::abs(p.xi_plus.x() * p.xi_minus.y() - p.xi_plus.y() * p.xi_minus.x()), 1e-3);
}

TEST(CharGeometry, NoRealCharacteristicsOutsideErgoregion) {
    try {
        spatial_null_covectors(vortex(1.0, 1.0), point2(2.0, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoRealCharacteristics);
    }
}

TEST(CharGeometry, ErgosphereCovectorIsKernel) {
    const SpacetimeMetric m = vortex(1.0, 2.0);
    const double re = std::sqrt(5.0);
    const Point y = point2(re * std::cos(0.4), re * std::sin(0.4));
    const Vec2 b = ergosphere_null_covector(m, y, CharTolerances{1e-10, 1e-6});
    EXPECT_LT((m.spatial_block(y) * b).norm(), 1e-10);
    EXPECT_THROW(ergosphere_null_covector(m, point2(1.5, 0.0)), Error);
}

TEST(CharGeometry, FramesSolveTheEikonalDirection) {
    const SpacetimeMetric m = vortex(-1.0, 1.0);
    const Point x = point2(1.2, 0.3);
    const FramePair f = char_frames(m, x);
    const NullDirectionPair p = spatial_null_covectors(m, x);
    EXPECT_NEAR(f.f_plus.dot(p.xi_plus), 0.0, 1e-12);
    EXPECT_NEAR(f.f_minus.dot(p.xi_minus), 0.0, 1e-12);
    EXPECT_NEAR(f.f_plus.norm(), 1.0, 1e-14);
}

TEST(CharGeometry, ClassifiesVortexHorizons) {
    const ClosedCurve c = ClosedCurve::circle(1.0, 512);
    const HoleClass white = classify_hole(c, vortex(1.0, 1.0));
    const HoleClass black = classify_hole(c, vortex(-1.0, 1.0));
    EXPECT_EQ(white.kind, HoleKind::WhiteHole);
    EXPECT_EQ(black.kind, HoleKind::BlackHole);
    EXPECT_GT(white.margin, 0.1);
    EXPECT_GT(black.margin, 0.1);
    EXPECT_LT(characteristic_residual(c, vortex(1.0, 1.0)), 1e-12);
}

TEST(CharGeometry, NonCharacteristicSurfaceRejected) {
    try {
        classify_hole(ClosedCurve::circle(1.2, 64), vortex(1.0, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCharacteristic);
    }
}

TEST(CharGeometry, TimeRootAtNull) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const Point x = point2(1.2, 0.0);
    const Vec2 xi = spatial_null_covectors(m, x).xi_plus;
    const double x0 = time_root_at_null(m, x, xi);
    const MetricMatrix g = m(x);
    const double H = g(0, 0) * x0 * x0 + 2.0 * x0 * (g(0, 1) * xi.x() + g(0, 2) * xi.y()) + xi.dot(m.spatial_block(x) * xi);
    EXPECT_NEAR(H, 0.0, 1e-12);
    EXPECT_NE(x0, 0.0);
}

TEST(CharGeometry, InnerConditionForVortices) {
    const ClosedCurve s1 = ClosedCurve::circle(0.8, 128);
    EXPECT_EQ(inner_boundary_condition(vortex(-1.0, 1.0), s1).condition, InnerCondition::B);
    EXPECT_EQ(inner_boundary_condition(vortex(1.0, 1.0), s1).condition, InnerCondition::A);
    try {
        inner_boundary_condition(vortex(1.0, 1.0), ClosedCurve::circle(1.6, 64));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotInErgoregion);
    }
}

TEST(CharGeometry, GordonInnerCondition) {
    FlowSpec f = vortex_flow(-0.3, 0.3, Domain::annulus(0.44, 10.0));
    f.with_constant_index(2.0);
    const GordonInnerReport r = gordon_inner_condition(f, ClosedCurve::circle(0.5, 128));
    EXPECT_EQ(r.condition, InnerCondition::B);
    EXPECT_LT(r.max_value, -1.0);
}
