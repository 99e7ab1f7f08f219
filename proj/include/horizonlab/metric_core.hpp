#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "horizonlab/error.hpp"

namespace horizonlab {

// Spatial points and spacetime matrices are small; the fixed maxima keep them
// on the stack. Index 0 of a spacetime matrix is time.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SpatialMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using MetricMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

Point point2(double x1, double x2);
Point point3(double x1, double x2, double x3);

/// Explicit validity region of a metric. Evaluation outside raises
/// EvaluationOutsideDomain instead of extrapolating.
struct Domain {
    enum class Kind { Everywhere, Annulus, Box };

    Kind kind = Kind::Everywhere;
    // Annulus (distance from origin): r_min < |x| <= r_max, with r_min
    // exclusive only when it is zero.
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();
    // Box: componentwise bounds.
    Point lo;
    Point hi;

    static Domain everywhere() { return {}; }
    static Domain annulus(double r_min, double r_max);
    static Domain box(Point lo, Point hi);

    bool contains(const Point& x) const;
    std::string describe() const;
};

/// Contravariant Lorentzian metric field g^{jk}(x) over n spatial dimensions.
///
/// The evaluator is a pure function of x, so a SpacetimeMetric can be shared
/// across threads. Derivatives come from the analytic callback when one is
/// supplied, otherwise from central differences with step
/// `fd_relative_step * (1 + |x|)`.
class SpacetimeMetric {
public:
    using Evaluator = std::function<MetricMatrix(const Point&)>;
    /// Returns d g^{jk} / d x_p for spatial index p in [0, n).
    using Derivative = std::function<MetricMatrix(const Point&, int)>;

    SpacetimeMetric() = default;
    SpacetimeMetric(int n_space, Evaluator eval, Domain domain = {}, Derivative deriv = {},
                    std::string family = "custom");

    int n_space() const { return n_space_; }
    const Domain& domain() const { return domain_; }
    const std::string& family() const { return family_; }
    bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }

    bool contains(const Point& x) const { return domain_.contains(x); }

    /// Full (n+1)x(n+1) matrix; throws EvaluationOutsideDomain outside the domain.
    MetricMatrix operator()(const Point& x) const;
    SpatialMatrix spatial_block(const Point& x) const;

    MetricMatrix derivative(const Point& x, int p) const;
    MetricMatrix fd_derivative(const Point& x, int p, double h) const;
    double fd_step(const Point& x) const { return fd_relative_step_ * (1.0 + x.norm()); }
    void set_fd_relative_step(double h) { fd_relative_step_ = h; }

    /// alpha * g^{jk}, alpha > 0.
    SpacetimeMetric scaled(double alpha) const;
    /// g^{0j} -> -g^{0j}; for the flow families this is w -> -w.
    SpacetimeMetric time_reversed() const;
    SpacetimeMetric with_domain(Domain domain) const;

private:
    int n_space_ = 2;
    Evaluator eval_;
    Derivative deriv_;
    Domain domain_;
    std::string family_ = "custom";
    double fd_relative_step_ = 1e-5;
};

/// Flow description shared by the Gordon, slow-medium and acoustic families.
/// Optional derivative callbacks enable analytic metric derivatives.
struct FlowSpec {
    int n_space = 2;
    std::function<Point(const Point&)> velocity;
    std::function<SpatialMatrix(const Point&)> velocity_jacobian;  // J(i, p) = d w_i / d x_p
    std::function<double(const Point&)> index = [](const Point&) { return 1.0; };
    std::function<Point(const Point&)> index_gradient;
    double c = 1.0;
    std::function<double(const Point&)> rho = [](const Point&) { return 1.0; };
    std::function<Point(const Point&)> rho_gradient;
    Domain domain;
    std::string name = "flow";

    /// Marks index and density as constant so analytic derivatives are available.
    FlowSpec& with_constant_index(double n);
    FlowSpec& with_constant_density(double rho0);
};

SpacetimeMetric gordon_metric(const FlowSpec& flow);
SpacetimeMetric slow_medium_metric(const FlowSpec& flow);
SpacetimeMetric acoustic_metric(const FlowSpec& flow);

/// v = (A/r) r_hat + (B/r) theta_hat with rho = c = 1 unless overridden.
FlowSpec vortex_flow(double A, double B, Domain domain = Domain::annulus(0.0, std::numeric_limits<double>::infinity()));

struct RadialProfile {
    std::function<double(double)> A;
    std::function<double(double)> B;
    std::function<double(double)> dA;  // optional
    std::function<double(double)> dB;  // optional
};

/// v = A(r) r_hat + B(r) theta_hat. The profile is checked on `samples`
/// points of [r1, r0]: B > 0, A^2 + B^2 > 1 below r0 and A^2 + B^2 = 1 at r0.
/// `outer_radius` bounds the evaluation domain beyond the ergosphere.
FlowSpec radial_profile_flow(const RadialProfile& profile, double r1, double r0,
                             double outer_radius, int samples = 1000);

/// Profile used by the example2_profile scenario: cubic A(r) through
/// (1.2, 1), (1.8, -1), (2.5, -1), (3, 0) and B(r) = exp(r0 - r) with r0 = 3.
RadialProfile example2_profile();

double spatial_det(const SpacetimeMetric& metric, const Point& x);

struct HyperbolicityReport {
    bool g00_positive = false;
    bool spatial_negative_definite = false;  // quadratic form over spatial covectors
    bool lower_g00_positive = false;         // (1,0,...,0) time-like
    bool conditions_agree = false;           // the two previous flags coincide
    double spatial_det = 0.0;
    double full_det = 0.0;
};

HyperbolicityReport validate_hyperbolicity(const SpacetimeMetric& metric, const Point& x);

/// [g_{jk}] = [g^{jk}]^{-1}; throws SingularMetric.
MetricMatrix lower_metric(const SpacetimeMetric& metric, const Point& x);

/// Checks symmetry, Lorentz signature, g^{00} > 0 and (-1)^n g > 0 at x.
/// Returns an empty string when all hold, otherwise the first violated one.
std::string lorentz_violation(const MetricMatrix& g, int n_space);

struct AxisymmetricOptions {
    double r_lo = 0.5;
    double r_hi = 2.0;
    double theta_lo = 0.2;
    double theta_hi = 2.9;
    int radial_samples = 6;
    int polar_samples = 6;
    int azimuth_samples = 8;
    double tolerance = 1e-10;
};

/// Reduces a phi-independent 3D metric to the (r, theta) plane of spherical
/// coordinates. The returned metric has n_space = 2 with x1 = r and
/// x2 = theta; its spatial block is the form a^{jk}(r, theta) acting on
/// (dS/dr, dS/dtheta). Throws NotAxisymmetric when sampled phi-dependence
/// exceeds the tolerance.
SpacetimeMetric axisym_reduce(const SpacetimeMetric& metric, const AxisymmetricOptions& options = {});

}  // namespace horizonlab
