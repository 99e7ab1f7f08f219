#include <gtest/gtest.h>

#include <cmath>

#include "horizonlab/horizon_finder.hpp"

using namespace horizonlab;

namespace {

SpacetimeMetric vortex(double A, double B) { return acoustic_metric(vortex_flow(A, B, Domain::annulus(0.25 * std::abs(A), 10.0))); }

HorizonConfig vortex_config(double A, double B) {
    const double re = std::hypot(A, B);
    HorizonConfig c;
    c.ergo_annulus = {0.5 * re, 2.0 * re};
    c.cycle_r_lo = 0.3 * std::abs(A);
    return c;
}

}  // namespace

TEST(HorizonFinder, ErgosphereIsCircle) {
    const ClosedCurve c = ergosphere_locus(vortex(2.0, 1.0), {1.0, 4.0}, 64);
    EXPECT_EQ(c.size(), 64u);
    for (const Vec2& p : c.points()) EXPECT_NEAR(p.norm(), std::sqrt(5.0), 1e-10);
}

TEST(HorizonFinder, ErgosphereNeedsSignChange) {
    try {
        ergosphere_locus(vortex(1.0, 1.0), {2.0, 4.0}, 16);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoSignChange);
    }
    EXPECT_THROW(ergosphere_locus(vortex(1.0, 1.0), {2.0, 1.0}, 16), Error);
}

TEST(HorizonFinder, ReturnMapFixedPointAtHorizon) {
    const SpacetimeMetric m = vortex(1.0, 1.0);
    PoincareSection s{0.0, 0.5, std::sqrt(2.0) - 1e-6, Family::Plus};
    for (Family f : {Family::Plus, Family::Minus}) {
        s.family = f;
        try {
            const ReturnResult r = return_map(m, s, 1.0);
            EXPECT_NEAR(r.r, 1.0, 1e-7);
            return;
        } catch (const Error&) {
        }
    }
    FAIL() << "neither family returns from r = 1";
}

TEST(HorizonFinder, SingleCycleForVortices) {
    for (auto [A, B] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{-1.0, 1.0}}) {
        const HorizonReport rep = horizon_report(vortex(A, B), vortex_config(A, B));
        ASSERT_EQ(rep.cycles.size(), 1u) << A << "," << B;
        EXPECT_NEAR(rep.cycles[0].cycle.fixed_r, std::abs(A), 1e-6);
        EXPECT_EQ(rep.cycles[0].hole.kind, A > 0 ? HoleKind::WhiteHole : HoleKind::BlackHole);
        EXPECT_NEAR(rep.ergo_r_min, std::hypot(A, B), 1e-9);
    }
}

TEST(HorizonFinder, Example2HasThreeCycles) {
    const SpacetimeMetric m = acoustic_metric(radial_profile_flow(example2_profile(), 1.0, 3.0, 3.2));
    HorizonConfig c;
    c.ergo_annulus = {2.5, 3.15};
    c.cycle_r_lo = 1.05;
    const HorizonReport rep = horizon_report(m, c);
    ASSERT_EQ(rep.cycles.size(), 3u);
    const double expected[3] = {1.2, 1.8, 2.5};
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(rep.cycles[k].cycle.fixed_r, expected[k], 1e-5);
}

TEST(HorizonFinder, ReportJsonMentionsClass) {
    const HorizonReport rep = horizon_report(vortex(1.0, 1.0), vortex_config(1.0, 1.0));
    const std::string j = rep.to_json();
    EXPECT_NE(j.find("WhiteHole"), std::string::npos);
    EXPECT_NE(j.find("ergosphere_r_min"), std::string::npos);
}
