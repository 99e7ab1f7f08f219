#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "horizonlab/curves.hpp"

using namespace horizonlab;

TEST(Curves, CircleGeometry) {
    const ClosedCurve c = ClosedCurve::circle(2.0, 400);
    EXPECT_EQ(c.size(), 400u);
    EXPECT_NEAR(c.signed_area(), M_PI * 4.0, 1e-3);
    EXPECT_NEAR(c.length(), 4.0 * M_PI, 1e-3);
    const auto n = c.outward_normals();
    for (std::size_t i = 0; i < c.size(); i += 37) EXPECT_NEAR(n[i].dot(c[i].normalized()), 1.0, 1e-8);
    EXPECT_FALSE(c.self_intersects());
}

TEST(Curves, ClockwiseNormalsStillPointOutward) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 64; ++k) pts.emplace_back(std::cos(-2 * M_PI * k / 64), std::sin(-2 * M_PI * k / 64));
    const ClosedCurve c(pts);
    EXPECT_LT(c.signed_area(), 0.0);
    EXPECT_GT(c.outward_normals()[5].dot(c[5]), 0.99);
}

TEST(Curves, MalformedInputRejected) {
    EXPECT_THROW(ClosedCurve(std::vector<Vec2>(3, Vec2(1.0, 0.0))), Error);
    std::vector<Vec2> pts;
    for (int k = 0; k < 16; ++k) pts.emplace_back(std::cos(M_PI * k / 16), std::sin(M_PI * k / 16));  // half circle
    try {
        ClosedCurve c(pts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedCurve);
    }
}

TEST(Curves, FigureEightSelfIntersects) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 200; ++k) {
        const double t = 2 * M_PI * k / 200;
        pts.emplace_back(std::sin(t), std::sin(t) * std::cos(t));
    }
    EXPECT_TRUE(ClosedCurve(pts).self_intersects());
}

TEST(Curves, CsvRoundTrip) {
    const ClosedCurve c = ClosedCurve::circle(1.3, 32, Vec2(0.5, -0.25));
    std::stringstream ss;
    c.write_csv(ss);
    const ClosedCurve back = ClosedCurve::read_csv(ss);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back[i], c[i]);
}
