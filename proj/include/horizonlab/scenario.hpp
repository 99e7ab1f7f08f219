#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horizonlab/horizon_finder.hpp"
#include "horizonlab/inverse_lab.hpp"
#include "horizonlab/metric_core.hpp"
#include "horizonlab/wave_fdtd.hpp"

namespace horizonlab {

struct MetricConfig {
    std::string family = "vortex";
    double A = 1.0;
    double B = 1.0;
    double c = 1.0;
    double rho = 1.0;
    double n_index = 1.0;
    double beta = 0.05;  // slow_medium_gradient potential strength
    double r1 = 1.0;     // example2_profile inner radius
    double r0 = 3.0;     // example2_profile outer radius
    double profile_outer = 3.2;
    double domain_r_min = 0.0;  // 0 selects a family default
    double domain_r_max = 0.0;
};

struct SourceConfig {
    std::string kind = "none";  // none | multipole | pulse
    double amplitude = 1.0;
    int m = 2;
    double duration = 1.0;
    double pulse_r = 0.7;
    double pulse_theta = 0.0;
    double width = 0.1;
    double rate_amplitude = 0.0;
};

struct WaveConfig {
    double t_end = 5.0;
    double dt = 0.0;
    double safety = 0.4;
    double ko_eps = 0.02;
    std::string inner = "outflow";  // outflow | dirichlet | inflow
    double r_exterior = 1.1;
    double r_interior = 0.9;
    int energy_every = 10;
    std::vector<Probe> probes;
    bool snapshot = true;
};

struct HorizonSearchConfig {
    double ergo_r_lo = 0.0;
    double ergo_r_hi = 0.0;
    int ergo_probes = 256;
    double cycle_r_lo = 0.0;
    double theta0 = 0.0;
    int scan_points = 64;
    int curve_samples = 512;
    double s1_radius = 0.0;  // > 0 adds a circular inner curve S1
};

struct RaysConfig {
    double start_r = 0.0;  // 0 selects the midpoint between horizon window and ergosphere
    double start_theta = 0.0;
    double sigma_max = 20.0;
    double s_max = 5.0;
};

struct ExperimentConfig {
    std::string kind = "none";  // none | nonuniqueness | gradient_pair
    std::vector<AnnularGrid> schedule;
    double t_end = 5.0;
    double sample_interval = 0.02;
    PerturbationSpec perturbation;
    double exterior_margin = 0.1;
    int margin_cells = 2;
    bool control = false;
    double control_B = 0.1;  // gradient_pair: strength of the non-gradient vortex control
};

struct ToleranceConfig {
    double ergo = 1e-8;
    double chr = 1e-6;
    double cycle = 1e-8;
    double null_h = 1e-8;
};

struct OutputConfig {
    std::string directory = "out";
    std::string format = "csv";  // csv | json
};

struct ScenarioConfig {
    std::string name = "custom";
    std::string description;
    MetricConfig metric;
    AnnularGrid grid{128, 256, 0.45, 3.0};
    SourceConfig source;
    WaveConfig wave;
    HorizonSearchConfig horizon_search;
    RaysConfig rays;
    ExperimentConfig experiment;
    ToleranceConfig tolerances;
    OutputConfig outputs;

    /// Checks every module precondition; throws ValidationError citing the key path.
    void validate() const;
    void scale_tolerances(double factor);
};

/// Metric families accepted in [metric] family.
const std::vector<std::string>& metric_families();

/// Parses an INI file. Unknown sections or keys raise UnknownKey, malformed
/// values ParseError, precondition failures ValidationError.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");
/// INI text that parses back to `config`.
std::string to_ini(const ScenarioConfig& config);

const std::vector<ScenarioConfig>& builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);
/// Builtin name or path to an INI file.
ScenarioConfig load_scenario(const std::string& name_or_path);

SpacetimeMetric build_metric(const MetricConfig& m);
/// The flow behind the metric, when the family has one.
std::optional<FlowSpec> build_flow(const MetricConfig& m);
HorizonConfig build_horizon_config(const ScenarioConfig& cfg);
SourceSpec build_source(const SourceConfig& s);
WaveOptions build_wave_options(const ScenarioConfig& cfg);
ExperimentOptions build_experiment_options(const ScenarioConfig& cfg);

}  // namespace horizonlab
