#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "horizonlab/char_geometry.hpp"
#include "horizonlab/metric_core.hpp"

namespace horizonlab {

struct PhasePoint {
    double x0 = 0.0;
    Point x;
    double xi0 = 0.0;
    Point xi;
};

enum class Termination {
    LeftDomain,
    MaxSteps,
    ReachedTime,
    StagnationDetected,
    ReachedParameterLimit,
    LeftErgoregion,
    ConvergedToCycle,
    CovectorBlowUp,
};
std::string to_string(Termination t);

/// H = sum_{j,k=0..n} g^{jk} xi_j xi_k.
double hamiltonian(const SpacetimeMetric& metric, const PhasePoint& p);

struct RayOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    double tol_null = 1e-8;
    double initial_step = 1e-3;
    long max_steps = 200000;
    std::optional<double> target_x0;
    double project_fraction = 0.1;  // project xi back onto H = 0 once |H| > fraction * tol_null; 0 disables
    double max_xi_growth = 1e3;  // stop once |xi| exceeds this multiple of its initial value
};

struct RayPath {
    std::vector<double> s;
    std::vector<PhasePoint> samples;
    std::vector<double> h_residuals;
    Termination termination = Termination::MaxSteps;
    double max_h() const;
    void write_csv(std::ostream& os) const;
};

/// Integrates dx_j/ds = 2 sum_k g^{jk} xi_k, dxi_p/ds = -sum d_p g^{jk} xi_j xi_k
/// with xi_0 held fixed.
RayPath integrate_ray(const SpacetimeMetric& metric, const PhasePoint& p0, double s_max,
                      const RayOptions& opts = {});

struct PlanarOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    double initial_step = 1e-3;
    long max_steps = 1000000;
    double boundary_tol = 1e-10;   // step-size bisection limit at ergoregion exits
    bool stop_on_cycle = false;    // stop when successive full turns repeat their radius
    double cycle_tol = 1e-9;
    CharTolerances tol;
};

struct PlanarOrbit {
    Family family = Family::Plus;
    int orientation = 1;
    std::vector<double> sigma;
    std::vector<Vec2> samples;
    double x0_lift = 0.0;
    Termination termination = Termination::ReachedParameterLimit;
    void write_csv(std::ostream& os) const;
};

/// Planar characteristic flow dx/dsigma = f_family(x) with a frame orientation
/// fixed once per orbit.
class PlanarFlow {
public:
    PlanarFlow(const SpacetimeMetric& metric, Family family, int orientation, CharTolerances tol = {});
    /// Throws NoRealCharacteristics outside the ergoregion.
    Vec2 operator()(const Vec2& x) const;
    /// Same field traversed backward in sigma.
    PlanarFlow reversed() const;
    const SpacetimeMetric& metric() const { return *metric_; }
    Family family() const { return family_; }
    int orientation() const { return orientation_; }

private:
    const SpacetimeMetric* metric_;
    Family family_;
    int orientation_;
    CharTolerances tol_;
    double sign_ = 1.0;
};

/// Adaptive single-orbit stepper used by the orbit integrator and the
/// return-map search. Steps that leave the ergoregion or the domain are cut
/// back until the step size falls below the boundary tolerance.
class PlanarStepper {
public:
    PlanarStepper(const PlanarFlow& flow, Vec2 x, const PlanarOptions& opts);
    /// Advances one accepted step not beyond sigma_limit. Returns false when the
    /// orbit cannot advance (exit reached).
    bool step(double sigma_limit);
    /// State after advancing the start of the last step by h (h within that step).
    Vec2 dense(double h) const;
    const Vec2& x() const { return x_; }
    double sigma() const { return sigma_; }
    const Vec2& prev_x() const { return x_prev_; }
    double prev_sigma() const { return sigma_prev_; }
    Termination exit_reason() const { return exit_; }

private:
    const PlanarFlow* flow_;
    PlanarOptions opts_;
    Vec2 x_, x_prev_;
    double sigma_ = 0.0, sigma_prev_ = 0.0;
    double dt_;
    Termination exit_ = Termination::LeftErgoregion;
};

PlanarOrbit integrate_planar_orbit(const SpacetimeMetric& metric, const Point& x_start, Family family,
                                   double sigma_max, const PlanarOptions& opts = {});

struct TimeRates {
    std::vector<double> rates;  // dsigma/dx0 per sample; zero exactly on the ergosphere
    int positive = 0;
    int negative = 0;
    int zero = 0;
};

/// Rates dsigma/dx0 along the forward null bicharacteristic lifting each
/// orbit sample. Throws ZeroTimeRate where dx0/ds vanishes.
TimeRates lift_time_direction(const SpacetimeMetric& metric, const PlanarOrbit& orbit,
                              const CharTolerances& tol = {});

}  // namespace horizonlab
