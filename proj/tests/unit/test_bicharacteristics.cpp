#include <gtest/gtest.h>

#include <cmath>

#include "horizonlab/bicharacteristics.hpp"

using namespace horizonlab;

namespace {

SpacetimeMetric vortex(double A, double B) { return acoustic_metric(vortex_flow(A, B, Domain::annulus(0.25 * std::abs(A), 10.0))); }

PhasePoint null_point(const SpacetimeMetric& m, const Point& x, double angle) {
    const MetricMatrix g = m(x);
    const double e1 = std::cos(angle), e2 = std::sin(angle);
    const double b = g(0, 1) * e1 + g(0, 2) * e2;
    const double q = g(1, 1) * e1 * e1 + 2 * g(1, 2) * e1 * e2 + g(2, 2) * e2 * e2;
    PhasePoint p;
    p.x = x;
    p.xi = point2(e1, e2);
    p.xi0 = (-b + std::sqrt(b * b - g(0, 0) * q)) / g(0, 0);
    return p;
}

}  // namespace

TEST(Bicharacteristics, MinkowskiRaysAreStraight) {
    const SpacetimeMetric m(2, [](const Point&) {
        MetricMatrix g = MetricMatrix::Zero(3, 3);
        g(0, 0) = 1.0;
        g(1, 1) = g(2, 2) = -1.0;
        return g;
    });
    PhasePoint p;
    p.x = point2(0.0, 0.0);
    p.xi = point2(1.0, 0.0);
    p.xi0 = 1.0;
    const RayPath path = integrate_ray(m, p, 2.0);
    EXPECT_EQ(path.termination, Termination::ReachedParameterLimit);
    const PhasePoint& end = path.samples.back();
    // dx/ds = 2 g xi = (-2, 0); dx0/ds = 2
    EXPECT_NEAR(end.x[0], -4.0, 1e-9);
    EXPECT_NEAR(end.x[1], 0.0, 1e-12);
    EXPECT_NEAR(end.x0, 4.0, 1e-9);
}

TEST(Bicharacteristics, HamiltonianConservedInVortex) {
    const SpacetimeMetric m = vortex(-1.0, 1.0);
    RayOptions o;
    o.tol_null = 1e-9;
    for (int k = 0; k < 4; ++k) {
        const RayPath path = integrate_ray(m, null_point(m, point2(3.0, 0.0), M_PI / 2 * k + 0.3), 3.0, o);
        EXPECT_LT(path.max_h(), 1e-8);
        for (const PhasePoint& p : path.samples) EXPECT_EQ(p.xi0, path.samples.front().xi0);
    }
}

TEST(Bicharacteristics, NonNullStartRejected) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    PhasePoint p = null_point(m, point2(3.0, 0.0), 0.0);
    p.xi0 += 0.1;
    try {
        integrate_ray(m, p, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConstraintDrift);
    }
}

TEST(Bicharacteristics, TargetTimeStopsExactly) {
    const SpacetimeMetric m = vortex(1.0, 2.0);
    RayOptions o;
    o.target_x0 = 0.7;
    const RayPath path = integrate_ray(m, null_point(m, point2(4.0, 0.0), 2.0), 50.0, o);
    EXPECT_EQ(path.termination, Termination::ReachedTime);
    EXPECT_NEAR(path.samples.back().x0, 0.7, 1e-10);
}

TEST(Bicharacteristics, RaysLeavingTheDomainStop) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const RayPath path = integrate_ray(m, null_point(m, point2(9.5, 0.0), M_PI), 100.0);
    EXPECT_EQ(path.termination, Termination::LeftDomain);
}

TEST(Bicharacteristics, PlanarOrbitStaysInErgoregion) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const PlanarOrbit orbit = integrate_planar_orbit(m, point2(1.2, 0.0), Family::Plus, 5.0);
    ASSERT_GT(orbit.samples.size(), 10u);
    for (const Vec2& x : orbit.samples) EXPECT_LE(x.norm(), std::sqrt(2.0) + 1e-9);
}

TEST(Bicharacteristics, TimeRatesSplitByFamily) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const PlanarOrbit plus = integrate_planar_orbit(m, point2(1.2, 0.0), Family::Plus, 5.0);
    const PlanarOrbit minus = integrate_planar_orbit(m, point2(1.2, 0.0), Family::Minus, 5.0);
    const TimeRates tp = lift_time_direction(m, plus);
    const TimeRates tm = lift_time_direction(m, minus);
    const bool split = (tp.negative == 0 && tm.positive == 0) || (tp.positive == 0 && tm.negative == 0);
    EXPECT_TRUE(split) << tp.positive << "/" << tp.negative << " vs " << tm.positive << "/" << tm.negative;
}

TEST(Bicharacteristics, PlanarFlowOutsideErgoregionThrows) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    const PlanarFlow f(m, Family::Plus, 1);
    EXPECT_THROW(f(Vec2(2.0, 0.0)), Error);
}
