#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "horizonlab/curves.hpp"
#include "horizonlab/metric_core.hpp"

namespace horizonlab {

/// Polar annulus with Nr radial cells (Nr + 1 node rings) and Ntheta periodic
/// angular nodes. Node (i, j) sits at r_min + i dr, j dtheta; storage is
/// row-major over (r, theta).
struct AnnularGrid {
    int Nr = 64;
    int Ntheta = 128;
    double r_min = 0.5;
    double r_max = 3.0;

    void validate() const;
    double dr() const { return (r_max - r_min) / Nr; }
    double dtheta() const { return 2.0 * M_PI / Ntheta; }
    double r(int i) const { return r_min + i * dr(); }
    double theta(int j) const { return j * dtheta(); }
    int rings() const { return Nr + 1; }
    std::size_t nodes() const { return static_cast<std::size_t>(rings()) * static_cast<std::size_t>(Ntheta); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(Ntheta) + static_cast<std::size_t>(j);
    }
    AnnularGrid refined(int factor = 2) const;
};

/// Polar metric coefficients at one point. `s` is r sqrt((-1)^n g); the
/// quadratic-form entries act on (u_t, u_r, u_theta).
struct PolarCoefficients {
    double s = 0.0;
    double a00 = 0.0, a0r = 0.0, a0t = 0.0;
    double arr = 0.0, art = 0.0, att = 0.0;
};

PolarCoefficients polar_coefficients(const SpacetimeMetric& metric, double r, double theta);

/// Node and half-node coefficient arrays realizing the wave operator in
/// Hamiltonian form with momentum pi = s (a00 u_t + a0r u_r + a0t u_theta).
struct OperatorBundle {
    AnnularGrid grid;
    std::vector<PolarCoefficients> node;
    std::vector<double> inv_sa00;   // 1 / (s a00)
    std::vector<double> beta_r;     // a0r / a00
    std::vector<double> beta_t;     // a0t / a00
    std::vector<double> k_rr, k_rt, k_tt;  // s (A - a0 a0^T / a00) at nodes
    std::vector<double> k_rr_half;  // at (i + 1/2, j), i = 0..Nr-1
    std::vector<double> k_tt_half;  // at (i, j + 1/2)
    std::vector<double> speed;      // characteristic speed bound per node
    std::vector<std::string> advisories;
};

/// Precomputes coefficient arrays. Throws SingularMetric on a degenerate node.
/// `min_wavelength` > 0 enables the resolution advisory (8 points per
/// wavelength); with `strict` it throws GridTooCoarse instead.
OperatorBundle first_order_reduce(const SpacetimeMetric& metric, const AnnularGrid& grid,
                                  double min_wavelength = 0.0, bool strict = false);

double cfl_dt(const OperatorBundle& ops, double safety = 0.4);

struct GaussianPulse {
    Vec2 center = Vec2::Zero();
    double width = 0.1;
    double amplitude = 1.0;       // u(0) = amplitude exp(-|x - c|^2 / width^2)
    double rate_amplitude = 0.0;  // u_t(0) with the same profile
};

using RimFunction = std::function<double(double t, double theta)>;

/// Volume source term time(t) * space(r, theta) added to d pi / dt; `space`
/// is sampled once per node when the solver is built.
struct SeparableTerm {
    std::function<double(double t)> time;
    std::function<double(double r, double theta)> space;
};

struct SourceSpec {
    enum class Kind { BoundaryDirichlet, InteriorPulse };
    Kind kind = Kind::InteriorPulse;
    RimFunction boundary_value;  // outer rim g(t, theta); zero when empty
    RimFunction boundary_rate;   // d g / d t
    double support_end = std::numeric_limits<double>::infinity();
    std::vector<GaussianPulse> pulses;
    std::vector<SeparableTerm> volume_terms;
    std::string id = "source";

    static SourceSpec windowed_multipole(double amplitude, int m, double duration);
    static SourceSpec pulse(GaussianPulse p);
};

struct InnerBoundary {
    /// Outflow extrapolates both fields; Dirichlet fixes u; Inflow fixes u and pi.
    enum class Mode { Outflow, Dirichlet, Inflow };
    Mode mode = Mode::Outflow;
    RimFunction value;     // u data; zero when empty
    RimFunction rate;      // d u / d t for Dirichlet
    RimFunction momentum;  // pi data for Inflow
};

struct WaveOptions {
    double safety = 0.4;
    double ko_eps = 0.02;
    InnerBoundary inner;
    double r_exterior = std::numeric_limits<double>::infinity();  // exterior region r >= r_exterior
    double r_interior = -1.0;                                       // interior region r <= r_interior
    double min_wavelength = 0.0;
    bool strict_resolution = false;
    int threads = 0;  // 0 leaves the OpenMP default
};

struct EnergySample {
    double t = 0.0;
    double total = 0.0;
    double exterior = 0.0;
    double interior = 0.0;
    double boundary_flux = 0.0;
};

struct WaveState {
    std::vector<double> u;
    std::vector<double> pi;
    double t = 0.0;
    std::vector<EnergySample> energy_history;
};

class WaveSolver {
public:
    WaveSolver(const SpacetimeMetric& metric, const AnnularGrid& grid, SourceSpec source, WaveOptions options = {});

    const OperatorBundle& operators() const { return ops_; }
    const AnnularGrid& grid() const { return ops_.grid; }
    const WaveState& state() const { return state_; }
    const SourceSpec& source() const { return source_; }
    const WaveOptions& options() const { return opts_; }

    double cfl(double safety) const { return cfl_dt(ops_, safety); }
    double default_dt() const { return cfl_dt(ops_, opts_.safety); }

    /// Replaces the fields (boundary rows are then enforced at the current time).
    void set_state(std::vector<double> u, std::vector<double> pi, double t);

    /// One RK4 step. Throws CFLViolation when dt is not in (0, cfl(1)] and
    /// NonFiniteField when the update produces NaN or Inf.
    void step(double dt);
    void record_energy();

    EnergySample energy(const std::vector<double>& u, const std::vector<double>& pi, double t) const;
    /// Radial derivative at (i, j): central inside, one-sided second order on the rims.
    double u_r(const std::vector<double>& u, int i, int j) const;
    double u_theta(const std::vector<double>& u, int i, int j) const;
    double probe(double r, double theta) const;

    double rim_value(double t, double theta) const;
    double rim_rate(double t, double theta) const;

private:
    void rhs(const std::vector<double>& u, const std::vector<double>& pi, double t, std::vector<double>& du,
             std::vector<double>& dpi);
    void apply_boundaries(std::vector<double>& u, std::vector<double>& pi, double t) const;
    void initialize_pulses();

    OperatorBundle ops_;
    SourceSpec source_;
    WaveOptions opts_;
    WaveState state_;
    double cfl_limit_ = 0.0;
    std::vector<double> k1u_, k1p_, k2u_, k2p_, k3u_, k3p_, k4u_, k4p_, tu_, tp_;
    std::vector<double> ur_, ut_, flux_r_, flux_t_, adv_r_, adv_t_;
    std::vector<std::vector<double>> volume_space_;
    std::vector<double> volume_time_;
};

struct Probe {
    double r = 1.0;
    double theta = 0.0;
};

struct RunOptions {
    double t_end = 1.0;
    double dt = 0.0;          // 0 selects the CFL step, shortened to land on t_end
    int energy_every = 1;
    int rim_every = 0;        // 0 disables rim recording
    std::vector<Probe> probes;
};

/// Rim rows (outer three rings) at one time, for Neumann data.
struct RimSnapshot {
    double t = 0.0;
    std::vector<double> u_outer;  // ring Nr
    std::vector<double> u_1;      // ring Nr - 1
    std::vector<double> u_2;      // ring Nr - 2
};

struct RunResult {
    WaveState final_state;
    std::vector<EnergySample> energy;
    std::vector<std::vector<std::pair<double, double>>> probe_series;
    std::vector<RimSnapshot> rim;
    double dt = 0.0;
    long steps = 0;
};

RunResult run_scenario(WaveSolver& solver, const RunOptions& run);

/// max_t E_exterior(t) / E_total(0). Throws ZeroEnergy when E_total(0) = 0.
double trapping_metric(const std::vector<EnergySample>& history);

/// H^1 norm squared of the outer-rim data over [0, t_end]: integral of
/// g^2 + g_t^2 + (g_theta / R)^2 over R dtheta dt, spectral in theta.
double boundary_h1_norm_sq(const RimFunction& g, double radius, int ntheta, double t_end, int nt);

/// Exact solution u = cos(omega t) phi(r, theta) used for convergence studies.
struct ManufacturedSolution {
    std::function<double(double r, double theta)> phi;
    std::function<double(double r, double theta)> phi_r;
    std::function<double(double r, double theta)> phi_theta;
    double omega = 1.0;

    double u(double t, double r, double theta) const;
    double pi(const PolarCoefficients& c, double t, double r, double theta) const;
};

/// Outer-rim data (at radius r_outer) and volume source making `ms` an exact
/// solution on `metric`.
SourceSpec manufactured_source(const SpacetimeMetric& metric, const ManufacturedSolution& ms, double r_outer);
/// Inner-rim data matching `ms` at radius r_inner, in the given mode.
InnerBoundary manufactured_inner(const SpacetimeMetric& metric, const ManufacturedSolution& ms, double r_inner,
                                 InnerBoundary::Mode mode);
/// Discrete H1-type norm of (u - u_exact, pi - pi_exact) at the solver's time:
/// sqrt of the sum of e_pi^2 / s + s (e_r^2 + e_theta^2 / r^2) over trapezoid weights.
double manufactured_error(const WaveSolver& solver, const ManufacturedSolution& ms);

void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& history);
void write_probe_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series);
/// Little-endian float64 payload, row-major over (r, theta), and its JSON sidecar text.
std::string snapshot_binary(const WaveState& state);
std::string snapshot_sidecar(const AnnularGrid& grid, double t);

}  // namespace horizonlab
