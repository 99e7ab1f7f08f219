#include <gtest/gtest.h>

#include <cmath>

#include "horizonlab/inverse_lab.hpp"

using namespace horizonlab;

TEST(InverseLab, FittedOrderRecoversPowerLaw) {
    const std::vector<double> h = {0.1, 0.05, 0.025};
    EXPECT_NEAR(fitted_order(h, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
    EXPECT_TRUE(std::isnan(fitted_order(h, {1.0, 0.0, 1.0})));
}

TEST(InverseLab, PerturbationValidation) {
    EXPECT_THROW((PerturbationSpec{0.0, 0.6, 1.2}.validate()), Error);
    EXPECT_THROW((PerturbationSpec{0.5, 0.4, 0.1}.validate()), Error);
    const PerturbationSpec p{0.0, 0.6, 0.3};
    EXPECT_NO_THROW(p.validate());
    EXPECT_DOUBLE_EQ(p.bump(0.0), 1.0);
    EXPECT_DOUBLE_EQ(p.bump(0.6), 0.0);
    EXPECT_DOUBLE_EQ(p.bump(0.9), 0.0);
    EXPECT_GT(p.bump(0.3), 0.0);
}

TEST(InverseLab, PerturbedMetricChangesOnlyInsideSupport) {
    const SpacetimeMetric base = acoustic_metric(vortex_flow(-1.0, 1.0, Domain::annulus(0.1, 10.0)));
    const SpacetimeMetric pert = perturb_metric(base, {0.0, 0.6, 0.3});
    const Point in = point2(0.3, 0.0), out = point2(0.0, 1.5);
    EXPECT_NEAR(pert(in)(0, 0), base(in)(0, 0) * (1.0 - 0.3 * PerturbationSpec{0.0, 0.6, 0.3}.bump(0.3)), 1e-14);
    EXPECT_TRUE((pert(out) - base(out)).norm() == 0.0);
}

TEST(InverseLab, QuadraticPotentialVanishesOnRim) {
    const Potential b = quadratic_potential(0.05, 2.0);
    EXPECT_NEAR(b.value(point2(2.0, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(b.value(point2(0.0, 0.0)), 0.2, 1e-15);
    const Point g = b.gradient(point2(1.0, 0.5));
    EXPECT_NEAR(g[0], -0.1, 1e-15);
    EXPECT_NEAR(g[1], -0.05, 1e-15);
}

TEST(InverseLab, GradientPairRequiresZeroBoundaryPotential) {
    ExperimentOptions o;
    o.schedule = {AnnularGrid{8, 16, 0.5, 1.5}, AnnularGrid{16, 32, 0.5, 1.5}};
    o.t_end = 0.2;
    try {
        gradient_flow_pair(quadratic_potential(0.05, 2.0), 1.5, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BoundaryPotentialNonzero);
    }
}

TEST(InverseLab, GradientPairDifferenceShrinksUnderRefinement) {
    ExperimentOptions o;
    o.schedule = {AnnularGrid{16, 32, 0.5, 2.0}, AnnularGrid{32, 64, 0.5, 2.0}};
    o.t_end = 2.0;
    const GradientPairReport r = gradient_flow_pair(quadratic_potential(0.05, 2.0), 1.5, o);
    ASSERT_EQ(r.grids.size(), 2u);
    EXPECT_LT(r.grids[1].dn_diff, 0.5 * r.grids[0].dn_diff);
    EXPECT_NE(r.to_json().find("order_dn"), std::string::npos);
}

TEST(InverseLab, NonuniquenessNeedsBlackHole) {
    NonuniquenessSetup s{acoustic_metric(vortex_flow(1.0, 1.0, Domain::annulus(0.25, 10.0))), {}, {0.0, 0.6, 0.3}};
    s.horizon.ergo_annulus = {0.7, 2.8};
    s.horizon.cycle_r_lo = 0.3;
    ExperimentOptions o;
    o.schedule = {AnnularGrid{16, 32, 0.45, 3.0}, AnnularGrid{32, 64, 0.45, 3.0}};
    try {
        nonuniqueness_experiment(s, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotABlackHole);
    }
}

TEST(InverseLab, NonuniquenessRejectsLeakyPerturbation) {
    NonuniquenessSetup s{acoustic_metric(vortex_flow(-1.0, 1.0, Domain::annulus(0.25, 10.0))), {}, {0.0, 0.98, 0.3}};
    s.horizon.ergo_annulus = {1.0, 2.0};
    s.horizon.cycle_r_lo = 0.5;
    ExperimentOptions o;
    o.schedule = {AnnularGrid{16, 32, 0.45, 3.0}, AnnularGrid{32, 64, 0.45, 3.0}};
    try {
        nonuniqueness_experiment(s, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PerturbationLeak);
    }
}

TEST(InverseLab, DnTraceDifferenceShapes) {
    DNTrace a, b;
    a.times = {0.0, 1.0};
    a.ntheta = 2;
    a.values = {0.0, 1.0, 2.0, 3.0};
    b = a;
    b.values[3] = 2.5;
    EXPECT_DOUBLE_EQ(max_abs_difference(a, b), 0.5);
    EXPECT_DOUBLE_EQ(a.max_abs(), 3.0);
    b.ntheta = 4;
    b.times = {0.0};
    EXPECT_THROW(max_abs_difference(a, b), Error);
}

TEST(InverseLab, DnTraceOfForcedRun) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(-1.0, 1.0, Domain::annulus(0.25, 10.0)));
    WaveSolver s(m, AnnularGrid{24, 48, 0.45, 3.0}, SourceSpec::windowed_multipole(1.0, 2, 1.0));
    RunOptions ro;
    ro.t_end = 1.0;
    ro.rim_every = 5;
    const RunResult r = run_scenario(s, ro);
    const DNTrace tr = dn_trace(s, r);
    EXPECT_EQ(tr.ntheta, 48);
    EXPECT_EQ(tr.values.size(), tr.times.size() * 48u);
    EXPECT_GT(tr.max_abs(), 0.0);
    EXPECT_GT(tr.norm_h1, 0.0);
}
