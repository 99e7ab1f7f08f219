#include <gtest/gtest.h>

#include <cmath>

#include "horizonlab/metric_core.hpp"

using namespace horizonlab;

namespace {

SpacetimeMetric minkowski2() {
    return SpacetimeMetric(2, [](const Point&) {
        MetricMatrix g = MetricMatrix::Zero(3, 3);
        g(0, 0) = 1.0;
        g(1, 1) = g(2, 2) = -1.0;
        return g;
    });
}

}  // namespace

TEST(MetricCore, AcousticVortexComponents) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 2.0));
    const Point x = point2(1.5, 0.0);
    const MetricMatrix g = m(x);
    EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
    // v = (A/r, B/r) at theta = 0
    EXPECT_NEAR(g(0, 1), 1.0 / 1.5, 1e-15);
    EXPECT_NEAR(g(0, 2), 2.0 / 1.5, 1e-15);
    EXPECT_NEAR(g(1, 1), -1.0 + 1.0 / 2.25, 1e-15);
    EXPECT_NEAR(g(1, 2), 2.0 / 2.25, 1e-15);
    EXPECT_TRUE((g - g.transpose()).norm() == 0.0);
}

TEST(MetricCore, SpatialDeterminantChangesSignAtErgosphere) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 1.0));
    const double re = std::sqrt(2.0);
    EXPECT_GT(spatial_det(m, point2(re + 1e-3, 0.0)), 0.0);
    EXPECT_LT(spatial_det(m, point2(re - 1e-3, 0.0)), 0.0);
    EXPECT_NEAR(spatial_det(m, point2(0.0, re)), 0.0, 1e-14);
}

TEST(MetricCore, DomainIsEnforced) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 1.0, Domain::annulus(0.5, 3.0)));
    EXPECT_NO_THROW(m(point2(1.0, 0.0)));
    try {
        m(point2(0.1, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EvaluationOutsideDomain);
    }
    EXPECT_THROW(m(point2(4.0, 0.0)), Error);
}

TEST(MetricCore, AnalyticDerivativesMatchDifferences) {
    FlowSpec f = vortex_flow(-0.3, 0.3, Domain::annulus(0.45, 5.0));
    f.with_constant_index(2.0);
    const std::vector<SpacetimeMetric> metrics = {acoustic_metric(vortex_flow(1.0, 2.0)), gordon_metric(f),
                                                  slow_medium_metric(f)};
    const Point x = point2(0.9, -0.7);
    for (const SpacetimeMetric& m : metrics) {
        ASSERT_TRUE(m.has_analytic_derivative()) << m.family();
        for (int p = 0; p < 2; ++p) {
            const MetricMatrix a = m.derivative(x, p);
            const MetricMatrix d = m.fd_derivative(x, p, 1e-5);
            EXPECT_LT((a - d).cwiseAbs().maxCoeff(), 1e-7) << m.family() << " p=" << p;
        }
    }
}

TEST(MetricCore, GordonRequiresSubluminalFlow) {
    FlowSpec f = vortex_flow(0.0, 1.0);
    f.with_constant_index(1.5);
    const SpacetimeMetric m = gordon_metric(f);
    EXPECT_NO_THROW(m(point2(2.0, 0.0)));
    EXPECT_THROW(m(point2(0.5, 0.0)), Error);
}

TEST(MetricCore, LorentzViolationMessages) {
    const SpacetimeMetric m = minkowski2();
    EXPECT_TRUE(lorentz_violation(m(point2(0.0, 0.0)), 2).empty());
    MetricMatrix e = MetricMatrix::Identity(3, 3);
    EXPECT_FALSE(lorentz_violation(e, 2).empty());
    MetricMatrix asym = m(point2(0.0, 0.0));
    asym(0, 1) = 0.1;
    EXPECT_FALSE(lorentz_violation(asym, 2).empty());
}

TEST(MetricCore, HyperbolicityFlagsAgreeOutsideErgoregion) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 1.0));
    const HyperbolicityReport out = validate_hyperbolicity(m, point2(3.0, 0.0));
    EXPECT_TRUE(out.g00_positive);
    EXPECT_TRUE(out.spatial_negative_definite);
    EXPECT_TRUE(out.conditions_agree);
    const HyperbolicityReport in = validate_hyperbolicity(m, point2(1.2, 0.0));
    EXPECT_FALSE(in.spatial_negative_definite);
    EXPECT_TRUE(in.conditions_agree);
}

TEST(MetricCore, LowerMetricInverts) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 2.0));
    const Point x = point2(0.3, 1.7);
    const MetricMatrix prod = lower_metric(m, x) * m(x);
    EXPECT_LT((prod - MetricMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(MetricCore, TimeReversalAndScaling) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(1.0, 2.0));
    const Point x = point2(1.1, 0.4);
    const MetricMatrix g = m(x), r = m.time_reversed()(x), s = m.scaled(3.0)(x);
    EXPECT_DOUBLE_EQ(r(0, 1), -g(0, 1));
    EXPECT_DOUBLE_EQ(r(1, 1), g(1, 1));
    EXPECT_DOUBLE_EQ(s(1, 2), 3.0 * g(1, 2));
    EXPECT_THROW(m.scaled(-1.0), Error);
}

TEST(MetricCore, Example2ProfileHitsNodes) {
    const RadialProfile p = example2_profile();
    EXPECT_NEAR(p.A(1.2), 1.0, 1e-13);
    EXPECT_NEAR(p.A(1.8), -1.0, 1e-13);
    EXPECT_NEAR(p.A(2.5), -1.0, 1e-13);
    EXPECT_NEAR(p.A(3.0), 0.0, 1e-13);
    EXPECT_NEAR(p.B(3.0), 1.0, 1e-15);
    const double h = 1e-6;
    EXPECT_NEAR(p.dA(2.0), (p.A(2.0 + h) - p.A(2.0 - h)) / (2 * h), 1e-6);
}

TEST(MetricCore, RadialProfileValidation) {
    RadialProfile bad = example2_profile();
    bad.B = [](double) { return 0.5; };  // speed 1 not reached at r0
    try {
        radial_profile_flow(bad, 1.0, 3.0, 3.2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidProfile);
    }
    EXPECT_NO_THROW(radial_profile_flow(example2_profile(), 1.0, 3.0, 3.2));
}

TEST(MetricCore, AxisymmetricReductionOfMinkowski) {
    const SpacetimeMetric m3(3, [](const Point&) {
        MetricMatrix g = MetricMatrix::Zero(4, 4);
        g(0, 0) = 1.0;
        g(1, 1) = g(2, 2) = g(3, 3) = -1.0;
        return g;
    });
    const SpacetimeMetric red = axisym_reduce(m3);
    const MetricMatrix g = red(point2(2.0, 1.0));
    EXPECT_NEAR(g(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(g(1, 1), -1.0, 1e-12);
    EXPECT_NEAR(g(2, 2), -0.25, 1e-12);
    EXPECT_NEAR(g(1, 2), 0.0, 1e-12);
}

TEST(MetricCore, AxisymmetricReductionRejectsAzimuthalDependence) {
    const SpacetimeMetric m3(3, [](const Point& x) {
        MetricMatrix g = MetricMatrix::Zero(4, 4);
        g(0, 0) = 1.0 + 0.1 * x[0];
        g(1, 1) = g(2, 2) = g(3, 3) = -1.0;
        return g;
    });
    try {
        axisym_reduce(m3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAxisymmetric);
    }
}
