#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "horizonlab/horizon_finder.hpp"
#include "horizonlab/wave_fdtd.hpp"

namespace horizonlab {

/// Dirichlet-to-Neumann samples Lambda f on the outer rim, row-major over
/// (time sample, theta node).
struct DNTrace {
    std::vector<double> times;
    int ntheta = 0;
    std::vector<double> values;
    std::string forcing_id;
    double norm_h1 = 0.0;

    double at(std::size_t k, int j) const { return values[k * static_cast<std::size_t>(ntheta) + j]; }
    double max_abs() const;
    void write_csv(std::ostream& os) const;
};

/// Conormal derivative g^{jk} d_j u nu_k / sqrt(-g^{rr}) at every recorded rim
/// snapshot, with u_t taken from the forcing and u_r by one-sided second-order
/// differences. Throws NormalizationDomainError where -g^{rr} <= 0.
DNTrace dn_trace(const WaveSolver& solver, const RunResult& run);

/// max |a - b| over matching samples. Throws InvalidArgument on shape mismatch.
double max_abs_difference(const DNTrace& a, const DNTrace& b);

/// Smooth radial bump scaling g^{00} by (1 - amplitude * bump) on
/// inner_radius < r < outer_radius (inner_radius = 0 gives a disc).
struct PerturbationSpec {
    double inner_radius = 0.0;
    double outer_radius = 0.6;
    double amplitude = 0.3;

    void validate() const;
    double bump(double r) const;
};

SpacetimeMetric perturb_metric(const SpacetimeMetric& base, const PerturbationSpec& p);

/// Least-squares slope of log(values) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& values);

struct ExperimentOptions {
    std::vector<AnnularGrid> schedule;
    double t_end = 3.0;
    double sample_interval = 0.02;  // rim and field-difference sampling period
    double forcing_amplitude = 1.0;
    int forcing_m = 2;
    double forcing_duration = 1.0;
    WaveOptions wave;
};

struct GridDifference {
    AnnularGrid grid;
    double h = 0.0;  // radial spacing
    double dt = 0.0;
    long steps = 0;
    double exterior_diff = 0.0;
    double dn_diff = 0.0;
    double interior_diff = 0.0;
};

struct NonuniquenessThresholds {
    double order_lo = 1.7;
    double order_hi = 2.3;
    double interior_ratio = 100.0;
};

struct NonuniquenessReport {
    double horizon_radius = 0.0;
    double exterior_radius = 0.0;
    PerturbationSpec perturbation;
    bool control = false;
    std::vector<GridDifference> grids;
    double order_exterior = 0.0;
    double order_dn = 0.0;
    NonuniquenessThresholds thresholds;
    bool exterior_order_ok = false;
    bool dn_order_ok = false;
    bool interior_persists = false;
    bool passed() const { return exterior_order_ok && dn_order_ok && interior_persists; }
    std::string to_json() const;
};

struct NonuniquenessSetup {
    SpacetimeMetric base;
    HorizonConfig horizon;
    PerturbationSpec perturbation;
    double exterior_margin = 0.1;  // exterior region r >= horizon_radius + margin
    int margin_cells = 2;
    /// Skips the support check so the perturbation may sit outside the horizon.
    bool control = false;
};

/// Runs base and perturbed metrics in lockstep with identical boundary forcing on
/// each grid of the schedule. Throws NotABlackHole when no black-hole cycle is
/// found and PerturbationLeak when the support comes within margin_cells of it.
NonuniquenessReport nonuniqueness_experiment(const NonuniquenessSetup& setup, const ExperimentOptions& opts);

/// Potential b with gradient and Hessian, used for w = +-c grad b / (n^2 - 1).
struct Potential {
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> gradient;
    std::function<SpatialMatrix(const Point&)> hessian;
};

/// b = beta (r_max^2 - |x|^2).
Potential quadratic_potential(double beta, double r_max);

struct GradientPairReport {
    std::string label;
    std::vector<GridDifference> grids;  // dn_diff populated
    double order_dn = 0.0;
    double max_relative_change = 0.0;  // between successive grids
    std::string to_json() const;
};

/// Slow-medium metric with g^{0j} = sign * grad_j b (constant index n).
SpacetimeMetric gradient_flow_metric(const Potential& b, double n_index, double sign, double r_min, double r_max);

/// DN difference between the +grad b and -grad b slow-medium metrics. Throws
/// BoundaryPotentialNonzero when |b| exceeds 1e-12 on the outer rim.
GradientPairReport gradient_flow_pair(const Potential& b, double n_index, const ExperimentOptions& opts);

/// Non-gradient control: slow-medium vortex w = B theta_hat / r against its flip.
GradientPairReport vortex_flip_control(double B, double n_index, const ExperimentOptions& opts);

}  // namespace horizonlab
