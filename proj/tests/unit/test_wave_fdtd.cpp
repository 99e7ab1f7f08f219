#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "horizonlab/wave_fdtd.hpp"

using namespace horizonlab;

namespace {

SpacetimeMetric minkowski() {
    return SpacetimeMetric(2, [](const Point&) {
        MetricMatrix g = MetricMatrix::Zero(3, 3);
        g(0, 0) = 1.0;
        g(1, 1) = g(2, 2) = -1.0;
        return g;
    });
}

ManufacturedSolution mms() {
    ManufacturedSolution ms;
    ms.phi = [](double r, double t) { return std::sin(2 * r) * (1 + 0.5 * std::cos(2 * t)); };
    ms.phi_r = [](double r, double t) { return 2 * std::cos(2 * r) * (1 + 0.5 * std::cos(2 * t)); };
    ms.phi_theta = [](double r, double t) { return -std::sin(2 * r) * std::sin(2 * t); };
    return ms;
}

double mms_error(const SpacetimeMetric& m, int n, double r_min, double r_max, InnerBoundary::Mode mode) {
    const ManufacturedSolution ms = mms();
    AnnularGrid g{n, 2 * n, r_min, r_max};
    WaveOptions o;
    o.inner = manufactured_inner(m, ms, r_min, mode);
    WaveSolver s(m, g, manufactured_source(m, ms, r_max), o);
    std::vector<double> u(g.nodes()), p(g.nodes());
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j < g.Ntheta; ++j) {
            const auto k = g.index(i, j);
            u[k] = ms.u(0, g.r(i), g.theta(j));
            p[k] = ms.pi(s.operators().node[k], 0, g.r(i), g.theta(j));
        }
    }
    s.set_state(u, p, 0.0);
    RunOptions ro;
    ro.t_end = 0.5;
    ro.energy_every = 1000000;
    run_scenario(s, ro);
    return manufactured_error(s, ms);
}

}  // namespace

TEST(WaveFdtd, GridValidation) {
    EXPECT_THROW((AnnularGrid{64, 128, 0.0, 1.0}.validate()), Error);
    EXPECT_THROW((AnnularGrid{64, 128, 1.0, 0.5}.validate()), Error);
    EXPECT_NO_THROW((AnnularGrid{64, 128, 0.5, 1.0}.validate()));
    const AnnularGrid f = AnnularGrid{16, 32, 0.5, 2.0}.refined();
    EXPECT_EQ(f.Nr, 32);
    EXPECT_EQ(f.Ntheta, 64);
}

TEST(WaveFdtd, PolarCoefficientsOfMinkowski) {
    const PolarCoefficients c = polar_coefficients(minkowski(), 2.0, 0.3);
    EXPECT_NEAR(c.s, 2.0, 1e-14);
    EXPECT_NEAR(c.a00, 1.0, 1e-14);
    EXPECT_NEAR(c.arr, -1.0, 1e-14);
    EXPECT_NEAR(c.att, -0.25, 1e-14);
    EXPECT_NEAR(c.art, 0.0, 1e-14);
}

TEST(WaveFdtd, CflMatchesLightSpeed) {
    const OperatorBundle ops = first_order_reduce(minkowski(), AnnularGrid{32, 64, 1.0, 2.0});
    const double h = std::min(1.0 / 32, 2 * M_PI / 64);
    EXPECT_NEAR(cfl_dt(ops, 1.0), h, 1e-12);
}

TEST(WaveFdtd, StepRejectsCflViolation) {
    WaveSolver s(minkowski(), AnnularGrid{16, 32, 1.0, 2.0}, SourceSpec::pulse({Vec2(1.5, 0.0), 0.2, 1.0, 0.0}));
    try {
        s.step(2.0 * s.cfl(1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CFLViolation);
    }
    EXPECT_THROW(s.step(0.0), Error);
}

TEST(WaveFdtd, ResolutionAdvisory) {
    const OperatorBundle soft = first_order_reduce(minkowski(), AnnularGrid{8, 16, 1.0, 2.0}, 0.2);
    EXPECT_FALSE(soft.advisories.empty());
    try {
        first_order_reduce(minkowski(), AnnularGrid{8, 16, 1.0, 2.0}, 0.2, true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
    }
}

TEST(WaveFdtd, MinkowskiEnergyConserved) {
    WaveOptions o;
    o.ko_eps = 0.0;
    GaussianPulse p{Vec2(1.0, 0.0), 0.1, 1.0, 0.0};
    WaveSolver s(minkowski(), AnnularGrid{64, 128, 0.5, 1.5}, SourceSpec::pulse(p), o);
    RunOptions ro;
    ro.t_end = 0.3;
    ro.energy_every = 5;
    const RunResult r = run_scenario(s, ro);
    const double e0 = r.energy.front().total, e1 = r.energy.back().total;
    EXPECT_GT(e0, 0.0);
    EXPECT_LT(std::abs(e1 - e0) / e0, 1e-3);
}

TEST(WaveFdtd, MinkowskiEnergyDriftWithDissipationOnFineGrid) {
    GaussianPulse p{Vec2(1.0, 0.0), 0.1, 1.0, 0.0};
    WaveSolver s(minkowski(), AnnularGrid{256, 256, 0.5, 1.5}, SourceSpec::pulse(p));
    RunOptions ro;
    ro.t_end = 0.2;
    ro.energy_every = 20;
    const RunResult r = run_scenario(s, ro);
    const double e0 = r.energy.front().total;
    double drift = 0.0;
    for (const EnergySample& e : r.energy) drift = std::max(drift, std::abs(e.total - e0) / e0);
    EXPECT_LT(drift, 1e-3);
}

TEST(WaveFdtd, ManufacturedSolutionConvergesAtSecondOrder) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(-1.0, 1.0, Domain::annulus(0.1, 10.0)));
    const double e1 = mms_error(m, 16, 0.6, 2.0, InnerBoundary::Mode::Outflow);
    const double e2 = mms_error(m, 32, 0.6, 2.0, InnerBoundary::Mode::Outflow);
    const double order = std::log2(e1 / e2);
    EXPECT_GT(order, 1.6);
    EXPECT_LT(order, 2.5);
}

TEST(WaveFdtd, TrappingMetricContracts) {
    EXPECT_THROW(trapping_metric({}), Error);
    std::vector<EnergySample> zero(3);
    try {
        trapping_metric(zero);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroEnergy);
    }
    std::vector<EnergySample> h = {{0.0, 2.0, 0.1, 1.9, 0.0}, {1.0, 2.0, 0.5, 1.5, 0.0}, {2.0, 2.0, 0.2, 1.8, 0.0}};
    EXPECT_DOUBLE_EQ(trapping_metric(h), 0.25);
}

TEST(WaveFdtd, DrainTrapsInteriorPulse) {
    const SpacetimeMetric m = acoustic_metric(vortex_flow(-1.0, 1.0, Domain::annulus(0.1, 10.0)));
    GaussianPulse p{Vec2(0.7, 0.0), 0.1, 1.0, 0.0};
    WaveOptions o;
    o.r_exterior = 1.1;
    WaveSolver s(m, AnnularGrid{64, 128, 0.45, 3.0}, SourceSpec::pulse(p), o);
    RunOptions ro;
    ro.t_end = 2.0;
    ro.energy_every = 10;
    EXPECT_LT(trapping_metric(run_scenario(s, ro).energy), 0.05);
}

TEST(WaveFdtd, BoundaryH1NormOfMultipole) {
    const SourceSpec src = SourceSpec::windowed_multipole(1.0, 2, 1.0);
    const double a = boundary_h1_norm_sq(src.boundary_value, 2.0, 64, 2.0, 200);
    const double b = boundary_h1_norm_sq(src.boundary_value, 2.0, 128, 2.0, 400);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(a, b, 5e-3 * b);
}

TEST(WaveFdtd, WritersAndSnapshots) {
    WaveSolver s(minkowski(), AnnularGrid{8, 16, 1.0, 2.0}, SourceSpec::pulse({Vec2(1.5, 0.0), 0.3, 1.0, 0.0}));
    const std::string bin = snapshot_binary(s.state());
    EXPECT_EQ(bin.size(), 9u * 16u * 8u);
    const std::string side = snapshot_sidecar(s.grid(), 0.0);
    EXPECT_NE(side.find("\"Nr\""), std::string::npos);
    std::ostringstream os;
    write_energy_csv(os, {{0.0, 1.0, 0.5, 0.5, 0.0}});
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,E_total,E_exterior,E_interior,boundary_flux");
    EXPECT_NEAR(s.probe(1.5, 0.0), 1.0, 0.05);
}
