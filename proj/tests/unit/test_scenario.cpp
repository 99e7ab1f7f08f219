#include <gtest/gtest.h>

#include "horizonlab/scenario.hpp"

using namespace horizonlab;

namespace {

ErrorCode code_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Scenario, BuiltinsLoadAndValidate) {
    const std::vector<std::string> names = {"example1_vortex", "example1_drain",       "example1_AB12",
                                            "example2_profile", "gordon_slab",          "slow_medium_gradient",
                                            "nonuniqueness_blackhole"};
    for (const std::string& n : names) {
        const auto c = find_builtin(n);
        ASSERT_TRUE(c.has_value()) << n;
        EXPECT_NO_THROW(c->validate()) << n;
        EXPECT_NO_THROW(build_metric(c->metric)) << n;
    }
}

TEST(Scenario, Example1VortexParameters) {
    const ScenarioConfig c = load_scenario("example1_vortex");
    EXPECT_EQ(c.metric.family, "vortex");
    EXPECT_DOUBLE_EQ(c.metric.A, 1.0);
    EXPECT_DOUBLE_EQ(c.metric.B, 1.0);
    EXPECT_DOUBLE_EQ(c.metric.rho, 1.0);
    EXPECT_DOUBLE_EQ(c.metric.c, 1.0);
}

TEST(Scenario, RejectsNonPositiveRadius) {
    EXPECT_EQ(code_of("[grid]\nr_min = 0\n"), ErrorCode::ValidationError);
    EXPECT_NE(message_of("[grid]\nr_min = -1\n").find("grid.r_min"), std::string::npos);
}

TEST(Scenario, UnknownFamilyListsAllowed) {
    const std::string m = message_of("[metric]\nfamily = kerr\n");
    EXPECT_NE(m.find("metric.family"), std::string::npos);
    for (const std::string& f : metric_families()) EXPECT_NE(m.find(f), std::string::npos) << f;
}

TEST(Scenario, StrictKeys) {
    EXPECT_EQ(code_of("[metric]\nAlpha = 1\n"), ErrorCode::UnknownKey);
    EXPECT_EQ(code_of("[metrics]\nA = 1\n"), ErrorCode::UnknownKey);
    EXPECT_NE(message_of("[wave]\nsafty = 0.3\n").find("wave.safty"), std::string::npos);
}

TEST(Scenario, MalformedValues) {
    EXPECT_EQ(code_of("[metric]\nA = one\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("[grid]\nNr = 12.5\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("[wave]\nsnapshot = maybe\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("[experiment]\nschedule = 32by64\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("[metric\nA = 1\n"), ErrorCode::ParseError);
}

TEST(Scenario, ScheduleAndProbesParse) {
    const ScenarioConfig c = parse_config_text(
        "[metric]\nfamily = vortex\nA = -1\nB = 1\ndomain_r_min = 0.25\n"
        "[grid]\nr_min = 0.45\nr_max = 3\n"
        "[wave]\nprobes = 1.5:0; 2.0:1.57\n"
        "[experiment]\nkind = nonuniqueness\nschedule = 16x32, 32x64\n");
    ASSERT_EQ(c.experiment.schedule.size(), 2u);
    EXPECT_EQ(c.experiment.schedule[1].Ntheta, 64);
    EXPECT_DOUBLE_EQ(c.experiment.schedule[0].r_min, 0.45);
    ASSERT_EQ(c.wave.probes.size(), 2u);
    EXPECT_DOUBLE_EQ(c.wave.probes[1].theta, 1.57);
}

TEST(Scenario, IniRoundTrip) {
    for (const ScenarioConfig& c : builtin_scenarios()) {
        const std::string text = to_ini(c);
        const ScenarioConfig back = parse_config_text(text, c.name);
        EXPECT_EQ(to_ini(back), text) << c.name;
    }
}

TEST(Scenario, ToleranceScaling) {
    ScenarioConfig c = load_scenario("example1_drain");
    const double before = c.tolerances.cycle;
    c.scale_tolerances(10.0);
    EXPECT_DOUBLE_EQ(c.tolerances.cycle, 10.0 * before);
    EXPECT_THROW(c.scale_tolerances(0.0), Error);
}

TEST(Scenario, GradientFamilyNeedsPotentialRadius) {
    EXPECT_EQ(code_of("[metric]\nfamily = slow_medium_gradient\nn_index = 1.5\n[grid]\nr_min = 0.5\nr_max = 2\n"),
              ErrorCode::ValidationError);
}

TEST(Scenario, MissingFileIsIoError) {
    try {
        load_scenario("/nonexistent/file.ini");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(Scenario, BuildersFollowConfig) {
    const ScenarioConfig c = load_scenario("gordon_slab");
    const HorizonConfig h = build_horizon_config(c);
    EXPECT_TRUE(h.gordon_flow.has_value());
    EXPECT_TRUE(h.s1.has_value());
    EXPECT_EQ(build_source(c.source).kind, SourceSpec::Kind::BoundaryDirichlet);
    const WaveOptions w = build_wave_options(load_scenario("example1_vortex"));
    EXPECT_EQ(w.inner.mode, InnerBoundary::Mode::Inflow);
}
