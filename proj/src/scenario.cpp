#include "horizonlab/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "horizonlab/format.hpp"

namespace horizonlab {

namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, key + ": '" + text + "' is not a number");
    }
    if (used != text.size() || !std::isfinite(v)) fail(ErrorCode::ParseError, key + ": '" + text + "' is not a number");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, key + ": '" + text + "' is not an integer");
    }
    if (used != text.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        fail(ErrorCode::ParseError, key + ": '" + text + "' is not an integer");
    }
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    fail(ErrorCode::ParseError, key + ": '" + text + "' is not a boolean");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ' && ch != '\t') {
            cur.push_back(ch);
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

struct Field {
    std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

using FieldTable = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>;

template <class T>
Field number(T ScenarioConfig::*section, double T::*member) {
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { (c.*section).*member = parse_double(k, v); },
            [=](const ScenarioConfig& c) { return fmt_double((c.*section).*member); }};
}

template <class T>
Field integer(T ScenarioConfig::*section, int T::*member) {
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { (c.*section).*member = parse_int(k, v); },
            [=](const ScenarioConfig& c) { return std::to_string((c.*section).*member); }};
}

template <class T>
Field text(T ScenarioConfig::*section, std::string T::*member) {
    return {[=](ScenarioConfig& c, const std::string&, const std::string& v) { (c.*section).*member = v; },
            [=](const ScenarioConfig& c) { return (c.*section).*member; }};
}

template <class T>
Field flag(T ScenarioConfig::*section, bool T::*member) {
    return {[=](ScenarioConfig& c, const std::string& k, const std::string& v) { (c.*section).*member = parse_bool(k, v); },
            [=](const ScenarioConfig& c) { return std::string((c.*section).*member ? "true" : "false"); }};
}

std::string schedule_text(const std::vector<AnnularGrid>& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(s[k].Nr) + "x" + std::to_string(s[k].Ntheta);
    }
    return out;
}

std::string probes_text(const std::vector<Probe>& ps) {
    std::string out;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (k) out += ";";
        out += fmt_double(ps[k].r) + ":" + fmt_double(ps[k].theta);
    }
    return out;
}

const FieldTable& fields() {
    using S = ScenarioConfig;
    static const FieldTable table = {
        {"scenario",
         {{"name", {[](S& c, const std::string&, const std::string& v) { c.name = v; },
                    [](const S& c) { return c.name; }}},
          {"description", {[](S& c, const std::string&, const std::string& v) { c.description = v; },
                           [](const S& c) { return c.description; }}}}},
        {"metric",
         {{"family", text(&S::metric, &MetricConfig::family)},
          {"A", number(&S::metric, &MetricConfig::A)},
          {"B", number(&S::metric, &MetricConfig::B)},
          {"c", number(&S::metric, &MetricConfig::c)},
          {"rho", number(&S::metric, &MetricConfig::rho)},
          {"n_index", number(&S::metric, &MetricConfig::n_index)},
          {"beta", number(&S::metric, &MetricConfig::beta)},
          {"r1", number(&S::metric, &MetricConfig::r1)},
          {"r0", number(&S::metric, &MetricConfig::r0)},
          {"profile_outer", number(&S::metric, &MetricConfig::profile_outer)},
          {"domain_r_min", number(&S::metric, &MetricConfig::domain_r_min)},
          {"domain_r_max", number(&S::metric, &MetricConfig::domain_r_max)}}},
        {"grid",
         {{"Nr", {[](S& c, const std::string& k, const std::string& v) { c.grid.Nr = parse_int(k, v); },
                  [](const S& c) { return std::to_string(c.grid.Nr); }}},
          {"Ntheta", {[](S& c, const std::string& k, const std::string& v) { c.grid.Ntheta = parse_int(k, v); },
                      [](const S& c) { return std::to_string(c.grid.Ntheta); }}},
          {"r_min", {[](S& c, const std::string& k, const std::string& v) { c.grid.r_min = parse_double(k, v); },
                     [](const S& c) { return fmt_double(c.grid.r_min); }}},
          {"r_max", {[](S& c, const std::string& k, const std::string& v) { c.grid.r_max = parse_double(k, v); },
                     [](const S& c) { return fmt_double(c.grid.r_max); }}}}},
        {"source",
         {{"kind", text(&S::source, &SourceConfig::kind)},
          {"amplitude", number(&S::source, &SourceConfig::amplitude)},
          {"m", integer(&S::source, &SourceConfig::m)},
          {"duration", number(&S::source, &SourceConfig::duration)},
          {"pulse_r", number(&S::source, &SourceConfig::pulse_r)},
          {"pulse_theta", number(&S::source, &SourceConfig::pulse_theta)},
          {"width", number(&S::source, &SourceConfig::width)},
          {"rate_amplitude", number(&S::source, &SourceConfig::rate_amplitude)}}},
        {"wave",
         {{"t_end", number(&S::wave, &WaveConfig::t_end)},
          {"dt", number(&S::wave, &WaveConfig::dt)},
          {"safety", number(&S::wave, &WaveConfig::safety)},
          {"ko_eps", number(&S::wave, &WaveConfig::ko_eps)},
          {"inner", text(&S::wave, &WaveConfig::inner)},
          {"r_exterior", number(&S::wave, &WaveConfig::r_exterior)},
          {"r_interior", number(&S::wave, &WaveConfig::r_interior)},
          {"energy_every", integer(&S::wave, &WaveConfig::energy_every)},
          {"snapshot", flag(&S::wave, &WaveConfig::snapshot)},
          {"probes",
           {[](S& c, const std::string& k, const std::string& v) {
                c.wave.probes.clear();
                for (const std::string& item : split(v, ';')) {
                    if (item.empty()) continue;
                    const auto parts = split(item, ':');
                    if (parts.size() != 2) fail(ErrorCode::ParseError, k + ": expected r:theta pairs, got '" + item + "'");
                    c.wave.probes.push_back({parse_double(k, parts[0]), parse_double(k, parts[1])});
                }
            },
            [](const S& c) { return probes_text(c.wave.probes); }}}}},
        {"horizon_search",
         {{"ergo_r_lo", number(&S::horizon_search, &HorizonSearchConfig::ergo_r_lo)},
          {"ergo_r_hi", number(&S::horizon_search, &HorizonSearchConfig::ergo_r_hi)},
          {"ergo_probes", integer(&S::horizon_search, &HorizonSearchConfig::ergo_probes)},
          {"cycle_r_lo", number(&S::horizon_search, &HorizonSearchConfig::cycle_r_lo)},
          {"theta0", number(&S::horizon_search, &HorizonSearchConfig::theta0)},
          {"scan_points", integer(&S::horizon_search, &HorizonSearchConfig::scan_points)},
          {"curve_samples", integer(&S::horizon_search, &HorizonSearchConfig::curve_samples)},
          {"s1_radius", number(&S::horizon_search, &HorizonSearchConfig::s1_radius)}}},
        {"rays",
         {{"start_r", number(&S::rays, &RaysConfig::start_r)},
          {"start_theta", number(&S::rays, &RaysConfig::start_theta)},
          {"sigma_max", number(&S::rays, &RaysConfig::sigma_max)},
          {"s_max", number(&S::rays, &RaysConfig::s_max)}}},
        {"experiment",
         {{"kind", text(&S::experiment, &ExperimentConfig::kind)},
          {"schedule",
           {[](S& c, const std::string& k, const std::string& v) {
                c.experiment.schedule.clear();
                for (const std::string& item : split(v, ',')) {
                    if (item.empty()) continue;
                    const auto parts = split(item, 'x');
                    if (parts.size() != 2) fail(ErrorCode::ParseError, k + ": expected NrxNtheta, got '" + item + "'");
                    AnnularGrid g;
                    g.Nr = parse_int(k, parts[0]);
                    g.Ntheta = parse_int(k, parts[1]);
                    c.experiment.schedule.push_back(g);
                }
            },
            [](const S& c) { return schedule_text(c.experiment.schedule); }}},
          {"t_end", number(&S::experiment, &ExperimentConfig::t_end)},
          {"sample_interval", number(&S::experiment, &ExperimentConfig::sample_interval)},
          {"perturbation_inner",
           {[](S& c, const std::string& k, const std::string& v) {
                c.experiment.perturbation.inner_radius = parse_double(k, v);
            },
            [](const S& c) { return fmt_double(c.experiment.perturbation.inner_radius); }}},
          {"perturbation_outer",
           {[](S& c, const std::string& k, const std::string& v) {
                c.experiment.perturbation.outer_radius = parse_double(k, v);
            },
            [](const S& c) { return fmt_double(c.experiment.perturbation.outer_radius); }}},
          {"perturbation_amplitude",
           {[](S& c, const std::string& k, const std::string& v) {
                c.experiment.perturbation.amplitude = parse_double(k, v);
            },
            [](const S& c) { return fmt_double(c.experiment.perturbation.amplitude); }}},
          {"exterior_margin", number(&S::experiment, &ExperimentConfig::exterior_margin)},
          {"margin_cells", integer(&S::experiment, &ExperimentConfig::margin_cells)},
          {"control", flag(&S::experiment, &ExperimentConfig::control)},
          {"control_B", number(&S::experiment, &ExperimentConfig::control_B)}}},
        {"tolerances",
         {{"ergo", number(&S::tolerances, &ToleranceConfig::ergo)},
          {"chr", number(&S::tolerances, &ToleranceConfig::chr)},
          {"cycle", number(&S::tolerances, &ToleranceConfig::cycle)},
          {"null_h", number(&S::tolerances, &ToleranceConfig::null_h)}}},
        {"outputs",
         {{"directory", text(&S::outputs, &OutputConfig::directory)},
          {"format", text(&S::outputs, &OutputConfig::format)}}},
    };
    return table;
}

void require(bool ok, const std::string& message) {
    if (!ok) fail(ErrorCode::ValidationError, message);
}

void require_one_of(const std::string& key, const std::string& value, const std::vector<std::string>& allowed) {
    if (std::find(allowed.begin(), allowed.end(), value) != allowed.end()) return;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    fail(ErrorCode::ValidationError, key + ": unknown value '" + value + "' (allowed: " + list + ")");
}

}  // namespace

const std::vector<std::string>& metric_families() {
    static const std::vector<std::string> f = {"vortex",          "example2_profile",     "gordon_vortex",
                                               "slow_medium_vortex", "slow_medium_gradient", "minkowski"};
    return f;
}

void ScenarioConfig::validate() const {
    require(!name.empty(), "scenario.name must not be empty");
    require_one_of("metric.family", metric.family, metric_families());
    require(metric.c > 0.0, "metric.c must be positive");
    require(metric.rho > 0.0, "metric.rho must be positive");
    require(metric.n_index >= 1.0, "metric.n_index must be at least 1");
    if (metric.family == "vortex" || metric.family == "gordon_vortex") {
        require(metric.A != 0.0 || metric.B != 0.0, "metric.A and metric.B must not both vanish");
    }
    if (metric.family == "slow_medium_gradient") {
        require(metric.n_index > 1.0, "metric.n_index must exceed 1 for gradient flows");
        require(metric.domain_r_max > 0.0, "metric.domain_r_max (zero radius of the potential) must be positive");
        require(grid.r_max <= metric.domain_r_max, "grid.r_max must not exceed metric.domain_r_max");
    }
    if (metric.family == "example2_profile") {
        require(metric.r1 > 0.0 && metric.r0 > metric.r1, "metric.r0 must exceed metric.r1 > 0");
        require(metric.profile_outer > metric.r0, "metric.profile_outer must exceed metric.r0");
    }
    require(metric.domain_r_min >= 0.0, "metric.domain_r_min must be non-negative");
    require(metric.domain_r_max >= 0.0, "metric.domain_r_max must be non-negative");

    require(grid.Nr >= 4, "grid.Nr must be at least 4");
    require(grid.Ntheta >= 8, "grid.Ntheta must be at least 8");
    require(grid.r_min > 0.0, "grid.r_min must be positive");
    require(grid.r_max > grid.r_min, "grid.r_max must exceed grid.r_min");

    require_one_of("source.kind", source.kind, {"none", "multipole", "pulse"});
    require(source.duration > 0.0, "source.duration must be positive");
    require(source.width > 0.0, "source.width must be positive");
    require(source.m >= 0, "source.m must be non-negative");

    require(wave.t_end > 0.0, "wave.t_end must be positive");
    require(wave.dt >= 0.0, "wave.dt must be non-negative");
    require(wave.safety > 0.0 && wave.safety <= 1.0, "wave.safety must lie in (0, 1]");
    require(wave.ko_eps >= 0.0, "wave.ko_eps must be non-negative");
    require_one_of("wave.inner", wave.inner, {"outflow", "dirichlet", "inflow"});
    require(wave.energy_every >= 1, "wave.energy_every must be at least 1");
    for (const Probe& p : wave.probes) {
        require(p.r >= grid.r_min && p.r <= grid.r_max, "wave.probes: radius " + fmt_double(p.r) + " is off the grid");
    }

    require(horizon_search.ergo_probes >= 8, "horizon_search.ergo_probes must be at least 8");
    require(horizon_search.scan_points >= 4, "horizon_search.scan_points must be at least 4");
    require(horizon_search.curve_samples >= 8, "horizon_search.curve_samples must be at least 8");
    require(horizon_search.ergo_r_lo >= 0.0 && horizon_search.ergo_r_hi >= horizon_search.ergo_r_lo,
            "horizon_search.ergo_r_hi must not be below horizon_search.ergo_r_lo");
    require(horizon_search.cycle_r_lo >= 0.0, "horizon_search.cycle_r_lo must be non-negative");
    require(horizon_search.s1_radius >= 0.0, "horizon_search.s1_radius must be non-negative");

    require(rays.sigma_max > 0.0, "rays.sigma_max must be positive");
    require(rays.s_max > 0.0, "rays.s_max must be positive");
    require(rays.start_r >= 0.0, "rays.start_r must be non-negative");

    require_one_of("experiment.kind", experiment.kind, {"none", "nonuniqueness", "gradient_pair"});
    if (experiment.kind != "none") {
        require(experiment.schedule.size() >= 2, "experiment.schedule needs at least two grids");
        for (const AnnularGrid& g : experiment.schedule) {
            require(g.Nr >= 4 && g.Ntheta >= 8, "experiment.schedule: grid too small");
        }
        require(experiment.t_end > 0.0, "experiment.t_end must be positive");
        require(experiment.sample_interval > 0.0, "experiment.sample_interval must be positive");
        require(experiment.margin_cells >= 0, "experiment.margin_cells must be non-negative");
        if (experiment.kind == "nonuniqueness") {
            try {
                experiment.perturbation.validate();
            } catch (const Error& e) {
                fail(ErrorCode::ValidationError, std::string("experiment.perturbation: ") + e.what());
            }
            require(metric.family != "slow_medium_gradient", "experiment.kind: nonuniqueness needs a black-hole metric");
        }
        if (experiment.kind == "gradient_pair") {
            require(metric.family == "slow_medium_gradient", "experiment.kind: gradient_pair needs metric.family = slow_medium_gradient");
        }
    }

    require(tolerances.ergo > 0.0, "tolerances.ergo must be positive");
    require(tolerances.chr > 0.0, "tolerances.chr must be positive");
    require(tolerances.cycle > 0.0, "tolerances.cycle must be positive");
    require(tolerances.null_h > 0.0, "tolerances.null_h must be positive");
    require(!outputs.directory.empty(), "outputs.directory must not be empty");
    require_one_of("outputs.format", outputs.format, {"csv", "json"});

    // The metric must be evaluable on both grid rims.
    const SpacetimeMetric m = build_metric(metric);
    for (double r : {grid.r_min, grid.r_max}) {
        for (int j = 0; j < 16; ++j) {
            const double th = 2.0 * M_PI * j / 16.0;
            try {
                const std::string why = lorentz_violation(m(point2(r * std::cos(th), r * std::sin(th))), 2);
                if (!why.empty()) fail(ErrorCode::ValidationError, "grid: metric invalid at r = " + fmt_double(r) + ": " + why);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::ValidationError) throw;
                fail(ErrorCode::ValidationError,
                     std::string(r == grid.r_min ? "grid.r_min" : "grid.r_max") + ": metric not evaluable: " + e.what());
            }
        }
    }
}

void ScenarioConfig::scale_tolerances(double factor) {
    if (!(factor > 0.0)) fail(ErrorCode::ValidationError, "--tol-scale must be positive");
    tolerances.ergo *= factor;
    tolerances.chr *= factor;
    tolerances.cycle *= factor;
    tolerances.null_h *= factor;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorCode::ParseError, origin + ": " + e.message() + " at line " + std::to_string(e.line()));
    }
    ScenarioConfig cfg;
    const FieldTable& table = fields();
    for (const auto& [section, sub] : tree) {
        auto sec = std::find_if(table.begin(), table.end(), [&](const auto& s) { return s.first == section; });
        if (sec == table.end()) {
            if (sub.empty() && !sub.data().empty()) fail(ErrorCode::UnknownKey, origin + ": key '" + section + "' outside any section");
            fail(ErrorCode::UnknownKey, origin + ": unknown section [" + section + "]");
        }
        for (const auto& [key, node] : sub) {
            auto f = std::find_if(sec->second.begin(), sec->second.end(), [&](const auto& kv) { return kv.first == key; });
            if (f == sec->second.end()) fail(ErrorCode::UnknownKey, origin + ": unknown key " + section + "." + key);
            f->second.set(cfg, section + "." + key, node.data());
        }
    }
    for (AnnularGrid& g : cfg.experiment.schedule) {
        g.r_min = cfg.grid.r_min;
        g.r_max = cfg.grid.r_max;
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string to_ini(const ScenarioConfig& config) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [section, sub] : fields()) {
        if (!first) os << '\n';
        first = false;
        os << '[' << section << "]\n";
        for (const auto& [key, f] : sub) {
            const std::string v = f.get(config);
            if (v.empty()) continue;
            os << key << " = " << v << '\n';
        }
    }
    return os.str();
}

// ------------------------------------------------------------ builders

std::optional<FlowSpec> build_flow(const MetricConfig& m) {
    const double lo = m.domain_r_min;
    const double hi = m.domain_r_max > 0.0 ? m.domain_r_max : std::numeric_limits<double>::infinity();
    if (m.family == "vortex" || m.family == "slow_medium_vortex") {
        FlowSpec f = vortex_flow(m.A, m.B, Domain::annulus(lo > 0.0 ? lo : 1e-6, hi));
        f.c = m.c;
        if (m.family == "vortex") f.with_constant_density(m.rho);
        else f.with_constant_index(m.n_index);
        return f;
    }
    if (m.family == "gordon_vortex") {
        const double floor = std::hypot(m.A, m.B) / m.c * (1.0 + 1e-9);
        FlowSpec f = vortex_flow(m.A, m.B, Domain::annulus(std::max(lo, floor), hi));
        f.c = m.c;
        f.with_constant_index(m.n_index);
        return f;
    }
    if (m.family == "example2_profile") {
        FlowSpec f = radial_profile_flow(example2_profile(), m.r1, m.r0, m.profile_outer);
        f.c = m.c;
        f.with_constant_density(m.rho);
        return f;
    }
    return std::nullopt;
}

SpacetimeMetric build_metric(const MetricConfig& m) {
    if (m.family == "vortex" || m.family == "example2_profile") return acoustic_metric(*build_flow(m));
    if (m.family == "gordon_vortex") return gordon_metric(*build_flow(m));
    if (m.family == "slow_medium_vortex") return slow_medium_metric(*build_flow(m));
    if (m.family == "slow_medium_gradient") {
        const double outer = m.domain_r_max;
        return gradient_flow_metric(quadratic_potential(m.beta, outer), m.n_index, 1.0,
                                    m.domain_r_min > 0.0 ? m.domain_r_min : 1e-3, outer);
    }
    if (m.family == "minkowski") {
        SpacetimeMetric::Evaluator eval = [](const Point&) {
            MetricMatrix g = MetricMatrix::Zero(3, 3);
            g(0, 0) = 1.0;
            g(1, 1) = g(2, 2) = -1.0;
            return g;
        };
        SpacetimeMetric::Derivative deriv = [](const Point&, int) { return MetricMatrix(MetricMatrix::Zero(3, 3)); };
        return SpacetimeMetric(2, eval, Domain::everywhere(), deriv, "minkowski");
    }
    fail(ErrorCode::ValidationError, "metric.family: unknown value '" + m.family + "'");
}

HorizonConfig build_horizon_config(const ScenarioConfig& cfg) {
    HorizonConfig h;
    h.ergo_annulus = {cfg.horizon_search.ergo_r_lo, cfg.horizon_search.ergo_r_hi};
    h.ergo_probes = cfg.horizon_search.ergo_probes;
    h.cycle_r_lo = cfg.horizon_search.cycle_r_lo;
    h.theta0 = cfg.horizon_search.theta0;
    h.search.scan_points = cfg.horizon_search.scan_points;
    h.search.curve_samples = cfg.horizon_search.curve_samples;
    h.search.tol_cycle = cfg.tolerances.cycle;
    h.tol.ergo = cfg.tolerances.ergo;
    h.tol.chr = cfg.tolerances.chr;
    if (cfg.horizon_search.s1_radius > 0.0) h.s1 = ClosedCurve::circle(cfg.horizon_search.s1_radius, 720);
    if (cfg.metric.family == "gordon_vortex") h.gordon_flow = build_flow(cfg.metric);
    return h;
}

SourceSpec build_source(const SourceConfig& s) {
    if (s.kind == "multipole") return SourceSpec::windowed_multipole(s.amplitude, s.m, s.duration);
    if (s.kind == "pulse") {
        GaussianPulse p;
        p.center = Vec2(s.pulse_r * std::cos(s.pulse_theta), s.pulse_r * std::sin(s.pulse_theta));
        p.width = s.width;
        p.amplitude = s.amplitude;
        p.rate_amplitude = s.rate_amplitude;
        return SourceSpec::pulse(p);
    }
    SourceSpec none;
    none.id = "none";
    none.support_end = 0.0;
    return none;
}

WaveOptions build_wave_options(const ScenarioConfig& cfg) {
    WaveOptions o;
    o.safety = cfg.wave.safety;
    o.ko_eps = cfg.wave.ko_eps;
    o.r_exterior = cfg.wave.r_exterior;
    o.r_interior = cfg.wave.r_interior;
    if (cfg.wave.inner == "dirichlet") o.inner.mode = InnerBoundary::Mode::Dirichlet;
    else if (cfg.wave.inner == "inflow") o.inner.mode = InnerBoundary::Mode::Inflow;
    else o.inner.mode = InnerBoundary::Mode::Outflow;
    if (cfg.source.kind == "pulse") o.min_wavelength = M_PI * cfg.source.width;
    return o;
}

ExperimentOptions build_experiment_options(const ScenarioConfig& cfg) {
    ExperimentOptions o;
    o.schedule = cfg.experiment.schedule;
    for (AnnularGrid& g : o.schedule) {
        g.r_min = cfg.grid.r_min;
        g.r_max = cfg.grid.r_max;
    }
    o.t_end = cfg.experiment.t_end;
    o.sample_interval = cfg.experiment.sample_interval;
    o.forcing_amplitude = cfg.source.amplitude;
    o.forcing_m = cfg.source.m;
    o.forcing_duration = cfg.source.duration;
    o.wave = build_wave_options(cfg);
    return o;
}

// ------------------------------------------------------------ builtins

namespace {

ScenarioConfig example1(const std::string& name, double A, double B, const std::string& description) {
    ScenarioConfig c;
    c.name = name;
    c.description = description;
    c.metric.family = "vortex";
    c.metric.A = A;
    c.metric.B = B;
    c.metric.domain_r_min = 0.25 * std::abs(A);
    c.metric.domain_r_max = 10.0;
    const double re = std::hypot(A, B);
    c.grid = AnnularGrid{96, 192, 0.45 * std::abs(A), 1.5 * re};
    c.horizon_search.ergo_r_lo = 0.5 * re;
    c.horizon_search.ergo_r_hi = 1.4 * re;
    c.horizon_search.cycle_r_lo = 0.3 * std::abs(A);
    c.rays.start_r = 0.5 * (std::abs(A) + re);
    c.rays.sigma_max = 20.0;
    if (A > 0.0) {
        c.source.kind = "multipole";
        c.wave.inner = "inflow";
        c.wave.r_exterior = 1.1 * std::abs(A);
        c.wave.r_interior = 0.9 * std::abs(A);
    } else {
        c.source.kind = "pulse";
        c.source.pulse_r = 0.7 * std::abs(A);
        c.wave.inner = "outflow";
        c.wave.r_exterior = 1.1 * std::abs(A);
        c.wave.r_interior = std::abs(A);
    }
    c.wave.t_end = 5.0;
    c.wave.probes = {{0.5 * (c.grid.r_min + c.grid.r_max), 0.0}};
    c.outputs.directory = "out/" + name;
    return c;
}

std::vector<ScenarioConfig> make_builtins() {
    std::vector<ScenarioConfig> out;
    out.push_back(example1("example1_vortex", 1.0, 1.0, "Acoustic vortex A=B=1 (white hole at r=1, ergosphere sqrt 2)"));
    out.push_back(example1("example1_drain", -1.0, 1.0, "Draining vortex A=-1, B=1 (black hole at r=1)"));
    out.push_back(example1("example1_AB12", 1.0, 2.0, "Acoustic vortex A=1, B=2 (white hole at r=1, ergosphere sqrt 5)"));

    {
        ScenarioConfig c;
        c.name = "example2_profile";
        c.description = "Radial profile with three simple zeros of A -+ 1 (cycles at 1.2, 1.8, 2.5)";
        c.metric.family = "example2_profile";
        c.grid = AnnularGrid{64, 128, 1.05, 3.15};
        c.horizon_search.ergo_r_lo = 2.5;
        c.horizon_search.ergo_r_hi = 3.15;
        c.horizon_search.cycle_r_lo = 1.05;
        c.rays.start_r = 1.5;
        c.source.kind = "pulse";
        c.source.pulse_r = 2.0;
        c.source.width = 0.15;
        c.wave.inner = "inflow";
        c.wave.t_end = 1.0;
        c.wave.r_exterior = 2.6;
        c.wave.r_interior = 1.15;
        c.outputs.directory = "out/example2_profile";
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "gordon_slab";
        c.description = "Gordon metric, n=2, w=(-0.3 r_hat + 0.3 theta_hat)/r: ergosphere 0.8485, black hole at sqrt 0.45";
        c.metric.family = "gordon_vortex";
        c.metric.A = -0.3;
        c.metric.B = 0.3;
        c.metric.n_index = 2.0;
        c.metric.domain_r_min = 0.44;
        c.metric.domain_r_max = 10.0;
        c.grid = AnnularGrid{64, 128, 0.45, 2.0};
        c.horizon_search.ergo_r_lo = 0.6;
        c.horizon_search.ergo_r_hi = 1.5;
        c.horizon_search.cycle_r_lo = 0.5;
        c.horizon_search.s1_radius = 0.5;
        c.rays.start_r = 0.75;
        c.source.kind = "multipole";
        c.wave.inner = "outflow";
        c.wave.t_end = 3.0;
        c.wave.r_exterior = 0.9;
        c.wave.r_interior = 0.6;
        c.outputs.directory = "out/gordon_slab";
        out.push_back(c);
    }
    {
        ScenarioConfig c;
        c.name = "slow_medium_gradient";
        c.description = "Slow-medium pair w = +-grad b, b = 0.05 (4 - r^2), n = 1.5, with a vortex control";
        c.metric.family = "slow_medium_gradient";
        c.metric.n_index = 1.5;
        c.metric.beta = 0.05;
        c.metric.domain_r_max = 2.0;
        c.grid = AnnularGrid{64, 128, 0.5, 2.0};
        c.source.kind = "multipole";
        c.wave.inner = "dirichlet";
        c.wave.t_end = 3.0;
        c.wave.r_exterior = 1.0;
        c.wave.r_interior = 0.6;
        c.experiment.kind = "gradient_pair";
        c.experiment.schedule = {AnnularGrid{32, 64, 0.5, 2.0}, AnnularGrid{64, 128, 0.5, 2.0},
                                 AnnularGrid{128, 256, 0.5, 2.0}};
        c.experiment.t_end = 3.0;
        c.experiment.control_B = 0.1;
        c.outputs.directory = "out/slow_medium_gradient";
        out.push_back(c);
    }
    {
        ScenarioConfig c = example1("nonuniqueness_blackhole", -1.0, 1.0, "");
        c.description = "Draining vortex with a g^{00} bump inside r < 0.6, boundary forcing, three-grid schedule";
        c.grid = AnnularGrid{64, 128, 0.45, 3.0};
        c.source.kind = "multipole";
        c.wave.r_interior = 1.0;
        c.experiment.kind = "nonuniqueness";
        c.experiment.schedule = {AnnularGrid{32, 64, 0.45, 3.0}, AnnularGrid{64, 128, 0.45, 3.0},
                                 AnnularGrid{128, 256, 0.45, 3.0}};
        c.experiment.t_end = 5.0;
        c.experiment.perturbation = PerturbationSpec{0.0, 0.6, 0.3};
        c.outputs.directory = "out/nonuniqueness_blackhole";
        out.push_back(c);
    }
    for (const ScenarioConfig& c : out) c.validate();
    return out;
}

}  // namespace

const std::vector<ScenarioConfig>& builtin_scenarios() {
    static const std::vector<ScenarioConfig> all = make_builtins();
    return all;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name) {
    for (const ScenarioConfig& c : builtin_scenarios()) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
    if (auto b = find_builtin(name_or_path)) return *b;
    return parse_config(name_or_path);
}

}  // namespace horizonlab
