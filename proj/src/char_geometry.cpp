#include "horizonlab/char_geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace horizonlab {

std::string to_string(Family f) { return f == Family::Plus ? "+" : "-"; }
std::string to_string(HoleKind k) { return k == HoleKind::BlackHole ? "BlackHole" : "WhiteHole"; }

std::string to_string(InnerCondition c) {
    switch (c) {
        case InnerCondition::A: return "a";
        case InnerCondition::B: return "b";
        case InnerCondition::Neither: return "neither";
    }
    return "neither";
}

Vec2 as_vec2(const Point& x) {
    if (x.size() != 2) fail(ErrorCode::InvalidArgument, "expected a 2D point");
    return {x[0], x[1]};
}

Point as_point(const Vec2& v) { return point2(v.x(), v.y()); }

namespace {

Vec2 rot90(const Vec2& v) { return {-v.y(), v.x()}; }
double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct LocalBlock {
    Eigen::Matrix2d G;
    Vec2 g0;
    double g00 = 0.0;
};

LocalBlock local_block(const SpacetimeMetric& metric, const Point& x) {
    if (metric.n_space() != 2) fail(ErrorCode::InvalidArgument, "characteristic geometry needs a 2D metric");
    const MetricMatrix g = metric(x);
    LocalBlock b;
    b.G = g.bottomRightCorner(2, 2);
    b.g0 = Vec2(g(0, 1), g(0, 2));
    b.g00 = g(0, 0);
    return b;
}

std::string where(const Point& x) {
    std::ostringstream os;
    os.precision(12);
    os << " at (" << x[0] << ", " << x[1] << ")";
    return os.str();
}

void orient_forward(Vec2& xi, const Vec2& g0) {
    if (g0.dot(xi) < 0.0) xi = -xi;
}

NullDirectionPair null_pair(const LocalBlock& b, const Point& x, const CharTolerances& tol) {
    const double delta = b.G.determinant();
    const double scale = std::max(1.0, b.G.squaredNorm());
    if (delta > tol.ergo * scale) {
        fail(ErrorCode::NoRealCharacteristics, "Delta > 0" + where(x));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b.G);
    // Eigenvalues ascending: -q <= 0 <= p.
    double q = std::max(-es.eigenvalues()[0], 0.0);
    double p = std::max(es.eigenvalues()[1], 0.0);
    if (std::abs(delta) <= tol.ergo * scale) {
        // On the ergosphere within tolerance: collapse to the double root.
        if (p <= q) p = 0.0;
        else q = 0.0;
    }
    const Vec2 eq = es.eigenvectors().col(0);
    const Vec2 ep = es.eigenvectors().col(1);
    if (p + q <= 0.0) fail(ErrorCode::NoRealCharacteristics, "vanishing spatial block" + where(x));
    Vec2 a = (std::sqrt(q) * ep + std::sqrt(p) * eq).normalized();
    Vec2 c = (std::sqrt(q) * ep - std::sqrt(p) * eq).normalized();
    orient_forward(a, b.g0);
    orient_forward(c, b.g0);
    NullDirectionPair out;
    out.discriminant = -delta;
    if (cross(a, b.G * a) >= cross(c, b.G * c)) {
        out.xi_plus = a;
        out.xi_minus = c;
    } else {
        out.xi_plus = c;
        out.xi_minus = a;
    }
    return out;
}

FramePair frames_from(const NullDirectionPair& pair, int orientation) {
    FramePair f;
    f.orientation = orientation;
    f.f_plus = static_cast<double>(orientation) * rot90(pair.xi_plus);
    f.f_minus = static_cast<double>(orientation) * rot90(pair.xi_minus);
    return f;
}

double delta_at(const SpacetimeMetric& metric, const Vec2& x) { return spatial_det(metric, as_point(x)); }

Vec2 delta_gradient(const SpacetimeMetric& metric, const Vec2& y) {
    const double h = 1e-6 * (1.0 + y.norm());
    Vec2 g;
    for (int k = 0; k < 2; ++k) {
        Vec2 yp = y, ym = y;
        yp[k] += h;
        ym[k] -= h;
        g[k] = (delta_at(metric, yp) - delta_at(metric, ym)) / (2.0 * h);
    }
    return g;
}

}  // namespace

NullDirectionPair spatial_null_covectors(const SpacetimeMetric& metric, const Point& x, const CharTolerances& tol) {
    return null_pair(local_block(metric, x), x, tol);
}

Vec2 ergosphere_null_covector(const SpacetimeMetric& metric, const Point& y, const CharTolerances& tol) {
    const LocalBlock b = local_block(metric, y);
    const double delta = b.G.determinant();
    if (std::abs(delta) > tol.ergo) fail(ErrorCode::NotOnErgosphere, "|Delta| too large" + where(y));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b.G);
    const Eigen::Vector2d ev = es.eigenvalues();
    const int k = std::abs(ev[0]) <= std::abs(ev[1]) ? 0 : 1;
    if (std::abs(ev[1 - k]) <= 1e-10 * std::max(1.0, std::abs(ev[1 - k]))) {
        fail(ErrorCode::DegenerateRank, "spatial block rank below n - 1" + where(y));
    }
    Vec2 bvec = es.eigenvectors().col(k).normalized();
    const Vec2 nu = delta_gradient(metric, as_vec2(y));
    if (bvec.dot(nu) < 0.0) bvec = -bvec;
    return bvec;
}

int frame_orientation(const SpacetimeMetric& metric, const Point& x, const CharTolerances& tol) {
    const Vec2 x0 = as_vec2(x);
    const double r0 = x0.norm();
    if (!(r0 > 0.0)) fail(ErrorCode::FrameDiscontinuity, "radial probe undefined at the origin");
    const Vec2 dir = x0 / r0;
    double d0 = delta_at(metric, x0);
    if (d0 > tol.ergo) fail(ErrorCode::NoRealCharacteristics, "Delta > 0" + where(x));

    // March outward until Delta turns positive or the domain ends.
    double lo = r0;
    double hi = r0;
    double step = 1e-3 * std::max(1.0, r0);
    bool found = d0 >= 0.0;
    while (!found) {
        const double r = hi + step;
        const Vec2 y = r * dir;
        if (!metric.contains(as_point(y))) {
            if (step < 1e-12 * (1.0 + hi)) break;
            step *= 0.5;
            continue;
        }
        const double d = delta_at(metric, y);
        if (d >= 0.0) {
            lo = hi;
            hi = r;
            found = true;
            break;
        }
        hi = r;
        step *= 1.5;
    }
    if (!found) fail(ErrorCode::FrameDiscontinuity, "no ergosphere point outward from" + where(x));
    if (d0 < 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (delta_at(metric, mid * dir) < 0.0) lo = mid;
            else hi = mid;
        }
    }
    const Vec2 y = hi * dir;
    const LocalBlock b = local_block(metric, as_point(y));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(b.G);
    const int k = std::abs(es.eigenvalues()[0]) <= std::abs(es.eigenvalues()[1]) ? 0 : 1;
    Vec2 bf = es.eigenvectors().col(k).normalized();
    orient_forward(bf, b.g0);
    Vec2 nu = delta_gradient(metric, y);
    if (!(nu.norm() > 0.0)) nu = dir;
    const double s = rot90(bf).dot(nu);
    if (s == 0.0) fail(ErrorCode::FrameDiscontinuity, "common frame tangent to the ergosphere" + where(as_point(y)));
    return s < 0.0 ? 1 : -1;
}

FramePair char_frames(const SpacetimeMetric& metric, const Point& x, int orientation, const CharTolerances& tol) {
    if (orientation != 1 && orientation != -1) fail(ErrorCode::InvalidArgument, "orientation must be +1 or -1");
    return frames_from(spatial_null_covectors(metric, x, tol), orientation);
}

FramePair char_frames(const SpacetimeMetric& metric, const Point& x, const CharTolerances& tol) {
    return char_frames(metric, x, frame_orientation(metric, x, tol), tol);
}

double characteristic_residual(const ClosedCurve& surface, const SpacetimeMetric& metric) {
    if (surface.size() < 8) fail(ErrorCode::MalformedCurve, "fewer than 8 samples");
    const std::vector<Vec2> nu = surface.outward_normals();
    double worst = 0.0;
    for (std::size_t i = 0; i < surface.size(); ++i) {
        const Eigen::Matrix2d G = metric.spatial_block(as_point(surface[i]));
        worst = std::max(worst, std::abs(nu[i].dot(G * nu[i])));
    }
    return worst;
}

HoleClass classify_hole(const ClosedCurve& surface, const SpacetimeMetric& metric, const CharTolerances& tol) {
    HoleClass out;
    out.residual = characteristic_residual(surface, metric);
    if (out.residual > tol.chr) {
        std::ostringstream os;
        os << "characteristic residual " << out.residual << " exceeds " << tol.chr;
        fail(ErrorCode::NotCharacteristic, os.str());
    }
    const std::vector<Vec2> nu = surface.outward_normals();
    int pos = 0, neg = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < surface.size(); ++i) {
        const MetricMatrix g = metric(as_point(surface[i]));
        const double s = g(1, 0) * nu[i].x() + g(2, 0) * nu[i].y();
        if (s > 0.0) ++pos;
        else if (s < 0.0) ++neg;
        margin = std::min(margin, std::abs(s));
    }
    if (pos > 0 && neg > 0) fail(ErrorCode::MixedSign, "g^{j0} nu_j changes sign along the surface");
    if (pos == 0 && neg == 0) fail(ErrorCode::MixedSign, "g^{j0} nu_j vanishes along the surface");
    out.kind = pos > 0 ? HoleKind::WhiteHole : HoleKind::BlackHole;
    out.margin = margin;
    return out;
}

double time_root_at_null(const SpacetimeMetric& metric, const Point& y, const Vec2& xi) {
    const LocalBlock b = local_block(metric, y);
    const double s = b.g0.dot(xi);
    if (std::abs(s) <= 1e-14 * (1.0 + b.g0.norm() * xi.norm())) {
        fail(ErrorCode::ZeroRoot, "g^{0j} xi_j vanishes" + where(y));
    }
    return -2.0 * s / b.g00;
}

Vec2 forward_ray_velocity(const SpacetimeMetric& metric, const Point& x, Family family, const CharTolerances& tol) {
    const LocalBlock b = local_block(metric, x);
    const NullDirectionPair pair = null_pair(b, x, tol);
    const Vec2& xi = family == Family::Plus ? pair.xi_plus : pair.xi_minus;
    return b.G * xi;
}

InnerConditionReport inner_boundary_condition(const SpacetimeMetric& metric, const ClosedCurve& s1,
                                              const CharTolerances& tol) {
    const std::vector<Vec2> N = s1.outward_normals();
    InnerConditionReport rep;
    rep.min_plus = rep.min_minus = std::numeric_limits<double>::infinity();
    rep.max_plus = rep.max_minus = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s1.size(); ++i) {
        const Point x = as_point(s1[i]);
        const LocalBlock b = local_block(metric, x);
        if (!(b.G.determinant() < 0.0)) fail(ErrorCode::NotInErgoregion, "S1 sample outside the ergoregion" + where(x));
        const NullDirectionPair pair = null_pair(b, x, tol);
        const double up = (b.G * pair.xi_plus).normalized().dot(N[i]);
        const double um = (b.G * pair.xi_minus).normalized().dot(N[i]);
        rep.min_plus = std::min(rep.min_plus, up);
        rep.max_plus = std::max(rep.max_plus, up);
        rep.min_minus = std::min(rep.min_minus, um);
        rep.max_minus = std::max(rep.max_minus, um);
    }
    if (rep.min_plus > 0.0 && rep.min_minus > 0.0) rep.condition = InnerCondition::A;
    else if (rep.max_plus < 0.0 && rep.max_minus < 0.0) rep.condition = InnerCondition::B;
    else rep.condition = InnerCondition::Neither;
    return rep;
}

GordonInnerReport gordon_inner_condition(const FlowSpec& flow, const ClosedCurve& s1) {
    if (flow.n_space != 2) fail(ErrorCode::InvalidArgument, "Gordon inner condition needs a 2D flow");
    const std::vector<Vec2> N = s1.outward_normals();
    GordonInnerReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    rep.max_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s1.size(); ++i) {
        const Point x = as_point(s1[i]);
        const Point w = flow.velocity(x);
        const double beta2 = w.squaredNorm() / (flow.c * flow.c);
        if (!(beta2 < 1.0)) fail(ErrorCode::EvaluationOutsideDomain, "|w| >= c on S1" + where(x));
        const double gamma = 1.0 / std::sqrt(1.0 - beta2);
        const double n = flow.index(x);
        const Vec2 v = gamma * as_vec2(w) / flow.c;
        const double val = std::sqrt(n * n - 1.0) * v.dot(N[i]);
        rep.min_value = std::min(rep.min_value, val);
        rep.max_value = std::max(rep.max_value, val);
    }
    if (rep.min_value > 1.0) rep.condition = InnerCondition::A;
    else if (rep.max_value < -1.0) rep.condition = InnerCondition::B;
    return rep;
}

}  // namespace horizonlab
