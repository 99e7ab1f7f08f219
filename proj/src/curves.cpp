#include "horizonlab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "horizonlab/format.hpp"

namespace horizonlab {

ClosedCurve::ClosedCurve(std::vector<Vec2> samples) : pts_(std::move(samples)) {
    for (const Vec2& p : pts_) {
        if (!p.allFinite()) fail(ErrorCode::MalformedCurve, "curve contains non-finite samples");
    }
    if (pts_.size() >= 2) {
        const double first_step = (pts_[1] - pts_[0]).norm();
        if ((pts_.back() - pts_.front()).norm() <= 1e-12 * (1.0 + first_step + pts_.front().norm())) {
            pts_.pop_back();
        }
    }
    if (pts_.size() < 8) fail(ErrorCode::MalformedCurve, "closed curve needs at least 8 samples");

    std::vector<double> gaps(pts_.size() - 1);
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) gaps[i] = (pts_[i + 1] - pts_[i]).norm();
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (!(median > 0.0)) fail(ErrorCode::MalformedCurve, "curve has repeated samples");
    const double closing = (pts_.front() - pts_.back()).norm();
    if (closing > 10.0 * median) fail(ErrorCode::MalformedCurve, "curve is open (closing gap too large)");
}

ClosedCurve ClosedCurve::circle(double radius, int samples, Vec2 center) {
    if (!(radius > 0.0)) fail(ErrorCode::MalformedCurve, "circle radius must be positive");
    std::vector<Vec2> pts(static_cast<std::size_t>(std::max(samples, 0)));
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * M_PI * i / samples;
        pts[static_cast<std::size_t>(i)] = center + radius * Vec2(std::cos(t), std::sin(t));
    }
    return ClosedCurve(std::move(pts));
}

double ClosedCurve::signed_area() const {
    double a = 0.0;
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts_[i];
        const Vec2& q = pts_[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

std::vector<Vec2> ClosedCurve::tangents() const {
    const std::size_t n = pts_.size();
    std::vector<Vec2> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& m2 = pts_[(i + n - 2) % n];
        const Vec2& m1 = pts_[(i + n - 1) % n];
        const Vec2& p1 = pts_[(i + 1) % n];
        const Vec2& p2 = pts_[(i + 2) % n];
        const Vec2 d = (m2 - 8.0 * m1 + 8.0 * p1 - p2);
        t[i] = d.normalized();
    }
    return t;
}

std::vector<Vec2> ClosedCurve::outward_normals() const {
    std::vector<Vec2> t = tangents();
    const double orient = signed_area() >= 0.0 ? 1.0 : -1.0;
    for (Vec2& v : t) v = orient * Vec2(v.y(), -v.x());
    return t;
}

double ClosedCurve::length() const {
    double len = 0.0;
    for (std::size_t i = 0; i < pts_.size(); ++i) len += (pts_[(i + 1) % pts_.size()] - pts_[i]).norm();
    return len;
}

double ClosedCurve::max_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i < pts_.size(); ++i) g = std::max(g, (pts_[(i + 1) % pts_.size()] - pts_[i]).norm());
    return g;
}

namespace {
double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}
}  // namespace

bool ClosedCurve::self_intersects() const {
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segments_cross(pts_[i], pts_[(i + 1) % n], pts_[j], pts_[(j + 1) % n])) return true;
        }
    }
    return false;
}

void ClosedCurve::write_csv(std::ostream& os) const {
    os << "x1,x2\n";
    for (const Vec2& p : pts_) os << fmt_double(p.x()) << ',' << fmt_double(p.y()) << '\n';
}

ClosedCurve ClosedCurve::read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorCode::MalformedCurve, "empty curve CSV");
    std::vector<Vec2> pts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
            fail(ErrorCode::MalformedCurve, "curve CSV row needs two columns: " + line);
        }
        try {
            pts.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            fail(ErrorCode::MalformedCurve, "curve CSV row is not numeric: " + line);
        }
    }
    return ClosedCurve(std::move(pts));
}

}  // namespace horizonlab
