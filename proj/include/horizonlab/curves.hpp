#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "horizonlab/error.hpp"

namespace horizonlab {

using Vec2 = Eigen::Vector2d;

/// Closed planar curve stored as ordered samples with implicit periodic
/// closure (the last sample connects back to the first).
class ClosedCurve {
public:
    ClosedCurve() = default;

    /// Validates and stores samples. A repeated final sample equal to the first
    /// is dropped. Throws MalformedCurve for fewer than 8 distinct samples, non
    /// finite values, or a closing gap much larger than the typical spacing.
    explicit ClosedCurve(std::vector<Vec2> samples);

    static ClosedCurve circle(double radius, int samples, Vec2 center = Vec2::Zero());

    std::size_t size() const { return pts_.size(); }
    const Vec2& operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<Vec2>& points() const { return pts_; }

    /// Shoelace area; positive for counter-clockwise ordering.
    double signed_area() const;
    /// Unit tangents in sample order from a periodic fourth-order stencil.
    std::vector<Vec2> tangents() const;
    /// Unit normals pointing away from the enclosed region.
    std::vector<Vec2> outward_normals() const;
    double length() const;
    /// Largest distance between consecutive samples, closure included.
    double max_gap() const;
    /// Numerical self-intersection check over all non-adjacent segment pairs.
    bool self_intersects() const;

    void write_csv(std::ostream& os) const;
    static ClosedCurve read_csv(std::istream& is);

private:
    std::vector<Vec2> pts_;
};

}  // namespace horizonlab
