#pragma once

#include <string>
#include <vector>

#include "horizonlab/curves.hpp"
#include "horizonlab/metric_core.hpp"

namespace horizonlab {

struct CharTolerances {
    double ergo = 1e-8;   // |Delta| treated as on the ergosphere
    double chr = 1e-6;    // characteristic residual accepted as zero
};

enum class Family { Plus, Minus };
std::string to_string(Family f);

/// Unit null covectors of the spatial block at one point.
///
/// Both covectors are oriented forward (g^{0j} xi_j >= 0). The "+" label goes
/// to the line on which xi x (G xi) is positive, so labels are intrinsic and
/// continuous wherever Delta < 0.
struct NullDirectionPair {
    Vec2 xi_plus;
    Vec2 xi_minus;
    double discriminant = 0.0;  // (g^{12})^2 - g^{11} g^{22} = -Delta
};

/// Unit tangents of the two characteristic families.
struct FramePair {
    Vec2 f_plus;
    Vec2 f_minus;
    int orientation = 1;  // sign applied to J xi, J(a, b) = (-b, a)
};

enum class HoleKind { BlackHole, WhiteHole };
std::string to_string(HoleKind k);

struct HoleClass {
    HoleKind kind = HoleKind::BlackHole;
    double margin = 0.0;
    double residual = 0.0;
};

Vec2 as_vec2(const Point& x);
Point as_point(const Vec2& v);

NullDirectionPair spatial_null_covectors(const SpacetimeMetric& metric, const Point& x,
                                         const CharTolerances& tol = {});

/// Unit kernel covector of the spatial block on the ergosphere, signed so
/// that b . grad(Delta) > 0.
Vec2 ergosphere_null_covector(const SpacetimeMetric& metric, const Point& y, const CharTolerances& tol = {});

/// Orientation sign for the frame fields at x. A radial probe from x finds the
/// nearest ergosphere point outward; the sign makes the common frame there
/// point into the ergoregion.
int frame_orientation(const SpacetimeMetric& metric, const Point& x, const CharTolerances& tol = {});

FramePair char_frames(const SpacetimeMetric& metric, const Point& x, const CharTolerances& tol = {});
FramePair char_frames(const SpacetimeMetric& metric, const Point& x, int orientation,
                      const CharTolerances& tol = {});

/// Max over samples of |nu^T G nu| with nu the unit outward normal.
double characteristic_residual(const ClosedCurve& surface, const SpacetimeMetric& metric);

HoleClass classify_hole(const ClosedCurve& surface, const SpacetimeMetric& metric,
                        const CharTolerances& tol = {});

/// Nonzero root of the full characteristic polynomial in xi_0 for a spatial
/// null covector: -2 (g^{00})^{-1} g^{0j} xi_j.
double time_root_at_null(const SpacetimeMetric& metric, const Point& y, const Vec2& xi);

/// Forward ray velocity G xi of a family at x (spatial part, null xi_0 = 0).
Vec2 forward_ray_velocity(const SpacetimeMetric& metric, const Point& x, Family family,
                          const CharTolerances& tol = {});

enum class InnerCondition { A, B, Neither };
std::string to_string(InnerCondition c);

struct InnerConditionReport {
    InnerCondition condition = InnerCondition::Neither;
    double min_plus = 0.0, max_plus = 0.0;    // forward velocity of "+" dotted with N
    double min_minus = 0.0, max_minus = 0.0;  // same for "-"
};

/// Classifies an inner curve S1 inside the ergoregion: "a" when the forward
/// rays of both families leave through S1 (positive outward component), "b"
/// when both enter, "neither" otherwise.
InnerConditionReport inner_boundary_condition(const SpacetimeMetric& metric, const ClosedCurve& s1,
                                              const CharTolerances& tol = {});

struct GordonInnerReport {
    double min_value = 0.0;  // min over S1 of sqrt(n^2 - 1) (v . N)
    double max_value = 0.0;
    InnerCondition condition = InnerCondition::Neither;  // A if min > 1, B if max < -1
};

/// Evaluates sqrt(n^2 - 1) (v . N) on S1 for a Gordon flow, v the spatial part
/// of the four-velocity.
GordonInnerReport gordon_inner_condition(const FlowSpec& flow, const ClosedCurve& s1);

}  // namespace horizonlab
