#include "horizonlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "horizonlab/artifacts.hpp"
#include "horizonlab/bicharacteristics.hpp"
#include "horizonlab/format.hpp"
#include "horizonlab/horizon_finder.hpp"
#include "horizonlab/inverse_lab.hpp"
#include "horizonlab/scenario.hpp"
#include "horizonlab/wave_fdtd.hpp"

namespace horizonlab {

namespace {

using ojson = nlohmann::ordered_json;

struct Globals {
    std::string out_dir;
    double tol_scale = 1.0;
    int threads = 0;
    std::string format;
};

struct Context {
    const ScenarioConfig& cfg;
    ArtifactSet& art;
    std::ostream& out;
    int threads = 0;
};

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(); }

void require_ergo_window(const ScenarioConfig& cfg) {
    if (!(cfg.horizon_search.ergo_r_hi > cfg.horizon_search.ergo_r_lo)) {
        fail(ErrorCode::ValidationError, "horizon_search.ergo_r_hi must be set above horizon_search.ergo_r_lo");
    }
}

Table curve_table(const ClosedCurve& curve) {
    Table t{{"theta", "r", "x", "y"}, {}};
    for (const Vec2& p : curve.points()) t.rows.push_back({std::atan2(p.y(), p.x()), p.norm(), p.x(), p.y()});
    return t;
}

// ------------------------------------------------------------------ ergosphere

void cmd_ergosphere(Context& ctx) {
    require_ergo_window(ctx.cfg);
    const SpacetimeMetric metric = build_metric(ctx.cfg.metric);
    const HorizonConfig hc = build_horizon_config(ctx.cfg);
    const ClosedCurve curve = ergosphere_locus(metric, hc.ergo_annulus, hc.ergo_probes);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mean = 0.0;
    for (const Vec2& p : curve.points()) {
        lo = std::min(lo, p.norm());
        hi = std::max(hi, p.norm());
        mean += p.norm();
    }
    mean /= static_cast<double>(curve.size());
    ctx.art.add_table("ergosphere", curve_table(curve));
    ojson j;
    j["probes"] = curve.size();
    j["r_min"] = lo;
    j["r_max"] = hi;
    j["r_mean"] = mean;
    j["self_intersects"] = curve.self_intersects();
    ctx.art.add_text("ergosphere_report.json", j.dump(2) + "\n");
    ctx.art.log("ergosphere r_min=" + fmt_double(lo) + " r_max=" + fmt_double(hi));
    ctx.out << "ergosphere: " << curve.size() << " samples, r in [" << lo << ", " << hi << "]\n";
}

// ------------------------------------------------------------------ horizon / classify

HorizonReport run_horizon(Context& ctx) {
    require_ergo_window(ctx.cfg);
    const SpacetimeMetric metric = build_metric(ctx.cfg.metric);
    HorizonReport rep = horizon_report(metric, build_horizon_config(ctx.cfg));
    ctx.art.add_table("ergosphere", curve_table(rep.ergosphere));
    for (std::size_t k = 0; k < rep.cycles.size(); ++k) {
        ctx.art.add_table("cycle_" + std::to_string(k), curve_table(rep.cycles[k].cycle.curve));
    }
    return rep;
}

void cmd_horizon(Context& ctx) {
    const HorizonReport rep = run_horizon(ctx);
    ctx.art.add_text("horizon_report.json", rep.to_json());
    ctx.out << "horizon: ergosphere r in [" << rep.ergo_r_min << ", " << rep.ergo_r_max << "], " << rep.cycles.size()
            << " cycle(s)\n";
    for (const ClassifiedCycle& c : rep.cycles) {
        ctx.out << "  cycle r = " << fmt_double(c.cycle.fixed_r) << "  " << to_string(c.hole.kind)
                << "  margin = " << c.hole.margin << "\n";
        ctx.art.log("cycle r=" + fmt_double(c.cycle.fixed_r) + " class=" + to_string(c.hole.kind));
    }
}

void cmd_classify(Context& ctx) {
    const HorizonReport rep = run_horizon(ctx);
    Table t{{"cycle", "fixed_r", "is_black_hole", "margin", "char_residual"}, {}};
    ojson cycles = ojson::array();
    for (std::size_t k = 0; k < rep.cycles.size(); ++k) {
        const ClassifiedCycle& c = rep.cycles[k];
        const bool black = c.hole.kind == HoleKind::BlackHole;
        t.rows.push_back({static_cast<double>(k), c.cycle.fixed_r, black ? 1.0 : 0.0, c.hole.margin, c.cycle.char_residual});
        cycles.push_back({{"fixed_r", c.cycle.fixed_r},
                          {"class", to_string(c.hole.kind)},
                          {"margin", c.hole.margin},
                          {"residual", c.hole.residual}});
        ctx.out << "  r = " << fmt_double(c.cycle.fixed_r) << ": " << to_string(c.hole.kind) << "\n";
    }
    ctx.art.add_table("classification", t);
    ojson j;
    j["cycles"] = cycles;
    j["inner_condition"] = rep.inner_condition ? ojson(to_string(rep.inner_condition->condition)) : ojson();
    if (rep.gordon_condition) {
        j["gordon_condition"] = {{"condition", to_string(rep.gordon_condition->condition)},
                                 {"min", rep.gordon_condition->min_value},
                                 {"max", rep.gordon_condition->max_value}};
        ctx.out << "  S1 condition (Gordon): " << to_string(rep.gordon_condition->condition) << "\n";
    }
    if (rep.inner_condition) ctx.out << "  S1 condition: " << to_string(rep.inner_condition->condition) << "\n";
    ctx.art.add_text("classification_report.json", j.dump(2) + "\n");
}

// ------------------------------------------------------------------ rays

std::optional<PhasePoint> null_phase_point(const SpacetimeMetric& metric, const Point& x, double angle) {
    const MetricMatrix g = metric(x);
    const double e1 = std::cos(angle), e2 = std::sin(angle);
    const double b = g(0, 1) * e1 + g(0, 2) * e2;
    const double q = g(1, 1) * e1 * e1 + 2.0 * g(1, 2) * e1 * e2 + g(2, 2) * e2 * e2;
    const double disc = b * b - g(0, 0) * q;
    if (disc < 0.0 || g(0, 0) == 0.0) return std::nullopt;
    PhasePoint p;
    p.x = x;
    p.xi0 = (-b + std::sqrt(disc)) / g(0, 0);
    p.xi = point2(e1, e2);
    return p;
}

void cmd_rays(Context& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    const SpacetimeMetric metric = build_metric(cfg.metric);
    double r0 = cfg.rays.start_r;
    if (r0 <= 0.0) {
        require_ergo_window(cfg);
        r0 = 0.5 * (cfg.horizon_search.ergo_r_lo + cfg.horizon_search.ergo_r_hi);
    }
    const Point x0 = point2(r0 * std::cos(cfg.rays.start_theta), r0 * std::sin(cfg.rays.start_theta));

    Table rays{{"ray", "s", "x0", "x1", "x2", "xi0", "xi1", "xi2", "H"}, {}};
    ojson ray_json = ojson::array();
    double worst_h = 0.0, worst_drift = 0.0;
    RayOptions ro;
    ro.tol_null = cfg.tolerances.null_h;
    ro.max_steps = 20000;
    for (int k = 0; k < 8; ++k) {
        const auto p0 = null_phase_point(metric, x0, k * M_PI / 4.0);
        if (!p0) continue;
        const RayPath path = integrate_ray(metric, *p0, cfg.rays.s_max, ro);
        double drift = 0.0;
        for (std::size_t i = 0; i < path.samples.size(); ++i) {
            const PhasePoint& p = path.samples[i];
            drift = std::max(drift, std::abs(p.xi0 - p0->xi0));
            rays.rows.push_back({static_cast<double>(k), path.s[i], p.x0, p.x[0], p.x[1], p.xi0, p.xi[0], p.xi[1],
                                 path.h_residuals[i]});
        }
        worst_h = std::max(worst_h, path.max_h());
        worst_drift = std::max(worst_drift, drift);
        ray_json.push_back({{"ray", k},
                            {"direction", k * M_PI / 4.0},
                            {"samples", path.samples.size()},
                            {"max_abs_H", path.max_h()},
                            {"xi0_drift", drift},
                            {"termination", to_string(path.termination)}});
    }
    ctx.art.add_table("rays", rays);

    Table orbits{{"family", "sigma", "x", "y"}, {}};
    ojson orbit_json = ojson::array();
    PlanarOptions po;
    po.tol.ergo = cfg.tolerances.ergo;
    po.tol.chr = cfg.tolerances.chr;
    for (Family f : {Family::Plus, Family::Minus}) {
        PlanarOrbit orbit;
        try {
            orbit = integrate_planar_orbit(metric, x0, f, cfg.rays.sigma_max, po);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoRealCharacteristics && e.code() != ErrorCode::NotInErgoregion) throw;
            ctx.art.log("planar orbit skipped: start point outside the ergoregion");
            break;
        }
        const TimeRates tr = lift_time_direction(metric, orbit, po.tol);
        const double fam = f == Family::Plus ? 1.0 : -1.0;
        for (std::size_t i = 0; i < orbit.samples.size(); ++i) {
            orbits.rows.push_back({fam, orbit.sigma[i], orbit.samples[i].x(), orbit.samples[i].y()});
        }
        orbit_json.push_back({{"family", to_string(f)},
                              {"samples", orbit.samples.size()},
                              {"termination", to_string(orbit.termination)},
                              {"rates_positive", tr.positive},
                              {"rates_negative", tr.negative},
                              {"rates_zero", tr.zero}});
    }
    ctx.art.add_table("planar_orbits", orbits);

    ojson j;
    j["start"] = {x0[0], x0[1]};
    j["rays"] = ray_json;
    j["max_abs_H"] = worst_h;
    j["max_xi0_drift"] = worst_drift;
    j["planar_orbits"] = orbit_json;
    ctx.art.add_text("rays_report.json", j.dump(2) + "\n");
    ctx.out << "rays: " << ray_json.size() << " bicharacteristics, max |H| = " << worst_h << ", " << orbit_json.size()
            << " planar orbit(s)\n";
}

// ------------------------------------------------------------------ wave

void add_grid_table(Context& ctx, const std::string& stem, const std::vector<GridDifference>& grids) {
    Table t{{"Nr", "Ntheta", "h", "dt", "steps", "exterior_diff", "dn_diff", "interior_diff"}, {}};
    for (const GridDifference& d : grids) {
        t.rows.push_back({static_cast<double>(d.grid.Nr), static_cast<double>(d.grid.Ntheta), d.h, d.dt,
                          static_cast<double>(d.steps), d.exterior_diff, d.dn_diff, d.interior_diff});
    }
    ctx.art.add_table(stem, t);
}

void run_nonuniqueness(Context& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    NonuniquenessSetup setup{build_metric(cfg.metric), build_horizon_config(cfg), cfg.experiment.perturbation,
                             cfg.experiment.exterior_margin, cfg.experiment.margin_cells, cfg.experiment.control};
    ExperimentOptions opts = build_experiment_options(cfg);
    opts.wave.threads = ctx.threads;
    const NonuniquenessReport rep = nonuniqueness_experiment(setup, opts);
    add_grid_table(ctx, "nonuniqueness_grids", rep.grids);
    ctx.art.add_text("nonuniqueness_report.json", rep.to_json());
    ctx.out << "nonuniqueness: horizon r = " << rep.horizon_radius << ", order(exterior) = " << rep.order_exterior
            << ", order(DN) = " << rep.order_dn << ", interior persists = " << (rep.interior_persists ? "yes" : "no")
            << ", passed = " << (rep.passed() ? "yes" : "no") << "\n";
    ctx.art.log("nonuniqueness order_exterior=" + fmt_double(rep.order_exterior) + " order_dn=" + fmt_double(rep.order_dn));
}

void run_gradient_pair(Context& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    if (cfg.metric.family != "slow_medium_gradient") {
        fail(ErrorCode::ValidationError, "metric.family must be slow_medium_gradient for the gradient pair");
    }
    ExperimentOptions opts = build_experiment_options(cfg);
    opts.wave.threads = ctx.threads;
    const Potential b = quadratic_potential(cfg.metric.beta, cfg.metric.domain_r_max);
    const GradientPairReport pair = gradient_flow_pair(b, cfg.metric.n_index, opts);
    add_grid_table(ctx, "gradient_pair_grids", pair.grids);
    ojson j;
    j["pair"] = ojson::parse(pair.to_json());
    ctx.out << "gradient pair: DN order = " << pair.order_dn << "\n";
    if (cfg.experiment.control_B != 0.0) {
        const GradientPairReport ctrl = vortex_flip_control(cfg.experiment.control_B, cfg.metric.n_index, opts);
        add_grid_table(ctx, "vortex_control_grids", ctrl.grids);
        j["control"] = ojson::parse(ctrl.to_json());
        ctx.out << "vortex control: max relative change = " << ctrl.max_relative_change << "\n";
    }
    ctx.art.add_text("gauge_test_report.json", j.dump(2) + "\n");
}

void run_single_wave(Context& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    const SpacetimeMetric metric = build_metric(cfg.metric);
    WaveOptions wo = build_wave_options(cfg);
    wo.threads = ctx.threads;
    const SourceSpec source = build_source(cfg.source);
    WaveSolver solver(metric, cfg.grid, source, wo);
    RunOptions ro;
    ro.t_end = cfg.wave.t_end;
    ro.dt = cfg.wave.dt;
    ro.energy_every = cfg.wave.energy_every;
    ro.probes = cfg.wave.probes;
    const RunResult run = run_scenario(solver, ro);

    Table energy{{"t", "E_total", "E_exterior", "E_interior", "boundary_flux"}, {}};
    double ext_max = 0.0;
    for (const EnergySample& e : run.energy) {
        energy.rows.push_back({e.t, e.total, e.exterior, e.interior, e.boundary_flux});
        ext_max = std::max(ext_max, e.exterior);
    }
    ctx.art.add_table("energy", energy);
    if (!run.probe_series.empty()) {
        Table probes{{"t"}, {}};
        for (std::size_t p = 0; p < run.probe_series.size(); ++p) probes.columns.push_back("u" + std::to_string(p));
        for (std::size_t i = 0; i < run.probe_series.front().size(); ++i) {
            std::vector<double> row{run.probe_series.front()[i].first};
            for (const auto& series : run.probe_series) row.push_back(series[i].second);
            probes.rows.push_back(row);
        }
        ctx.art.add_table("probes", probes);
    }
    if (cfg.wave.snapshot) {
        ctx.art.add_text("field_u.bin", snapshot_binary(run.final_state));
        ctx.art.add_text("field_u.json", snapshot_sidecar(cfg.grid, run.final_state.t));
    }

    ojson j;
    j["grid"] = {{"Nr", cfg.grid.Nr}, {"Ntheta", cfg.grid.Ntheta}, {"r_min", cfg.grid.r_min}, {"r_max", cfg.grid.r_max}};
    j["dt"] = run.dt;
    j["steps"] = run.steps;
    j["t_end"] = run.final_state.t;
    j["source"] = source.id;
    j["max_exterior_energy"] = ext_max;
    j["final_energy"] = run.energy.empty() ? ojson() : ojson(run.energy.back().total);
    const bool forced = source.kind == SourceSpec::Kind::BoundaryDirichlet && source.boundary_value;
    if (forced) {
        const double h1 = boundary_h1_norm_sq(source.boundary_value, cfg.grid.r_max, cfg.grid.Ntheta, cfg.wave.t_end, 400);
        j["forcing_h1_norm_sq"] = h1;
        j["energy_constant"] = finite_or_null(h1 > 0.0 ? ext_max / h1 : NAN);
        ctx.out << "wave: " << run.steps << " steps, max exterior energy " << ext_max << ", C = " << ext_max / h1 << "\n";
    } else if (!run.energy.empty() && run.energy.front().total > 0.0) {
        const double trap = trapping_metric(run.energy);
        j["trapping_metric"] = trap;
        ctx.out << "wave: " << run.steps << " steps, trapping metric " << trap << "\n";
    }
    ctx.art.add_text("wave_report.json", j.dump(2) + "\n");
    ctx.art.log("wave steps=" + std::to_string(run.steps) + " dt=" + fmt_double(run.dt));
}

void cmd_wave(Context& ctx) {
    if (ctx.cfg.experiment.kind == "nonuniqueness") return run_nonuniqueness(ctx);
    if (ctx.cfg.experiment.kind == "gradient_pair") return run_gradient_pair(ctx);
    run_single_wave(ctx);
}

// ------------------------------------------------------------------ dn-compare / gauge-test

Table dn_table(const DNTrace& tr) {
    Table t{{"t", "theta", "lambda"}, {}};
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        for (int j = 0; j < tr.ntheta; ++j) t.rows.push_back({tr.times[k], 2.0 * M_PI * j / tr.ntheta, tr.at(k, j)});
    }
    return t;
}

void cmd_dn_compare(Context& ctx) {
    const ScenarioConfig& cfg = ctx.cfg;
    if (cfg.source.kind != "multipole") {
        fail(ErrorCode::ValidationError, "source.kind must be multipole for dn-compare (boundary forcing)");
    }
    const SpacetimeMetric base = build_metric(cfg.metric);
    const SpacetimeMetric pert = perturb_metric(base, cfg.experiment.perturbation);
    WaveOptions wo = build_wave_options(cfg);
    wo.threads = ctx.threads;
    const SourceSpec source = build_source(cfg.source);
    WaveSolver a(base, cfg.grid, source, wo);
    WaveSolver b(pert, cfg.grid, source, wo);
    const double dt = cfg.wave.dt > 0.0 ? cfg.wave.dt : std::min(a.default_dt(), b.default_dt());
    RunOptions ro;
    ro.t_end = cfg.wave.t_end;
    ro.dt = dt;
    ro.energy_every = cfg.wave.energy_every;
    ro.rim_every = std::max(1, static_cast<int>(std::lround(cfg.experiment.sample_interval / dt)));
    const RunResult ra = run_scenario(a, ro);
    const RunResult rb = run_scenario(b, ro);
    const DNTrace da = dn_trace(a, ra);
    const DNTrace db = dn_trace(b, rb);
    const double diff = max_abs_difference(da, db);
    ctx.art.add_table("dn_base", dn_table(da));
    ctx.art.add_table("dn_perturbed", dn_table(db));
    ojson j;
    j["perturbation"] = {{"inner_radius", cfg.experiment.perturbation.inner_radius},
                         {"outer_radius", cfg.experiment.perturbation.outer_radius},
                         {"amplitude", cfg.experiment.perturbation.amplitude}};
    j["dt"] = dt;
    j["samples"] = da.times.size();
    j["forcing_h1_norm"] = da.norm_h1;
    j["dn_max_abs"] = da.max_abs();
    j["dn_max_abs_difference"] = diff;
    j["relative_difference"] = finite_or_null(da.max_abs() > 0.0 ? diff / da.max_abs() : NAN);
    ctx.art.add_text("dn_compare_report.json", j.dump(2) + "\n");
    ctx.out << "dn-compare: max |Lambda_base - Lambda_perturbed| = " << diff << " (max |Lambda| = " << da.max_abs()
            << ")\n";
}

void cmd_gauge_test(Context& ctx) {
    if (ctx.cfg.experiment.schedule.size() < 2) {
        fail(ErrorCode::ValidationError, "experiment.schedule needs at least two grids for gauge-test");
    }
    run_gradient_pair(ctx);
}

// ------------------------------------------------------------------ dispatch

using Command = std::function<void(Context&)>;

int execute(const std::string& name, const Command& command, const std::string& target, const Globals& g,
            std::ostream& out, std::ostream& err) {
    ScenarioConfig cfg;
    std::string recorded;
    try {
        cfg = load_scenario(target);
        if (g.tol_scale != 1.0) cfg.scale_tolerances(g.tol_scale);
        if (!g.format.empty()) cfg.outputs.format = g.format;
        recorded = to_ini(cfg);
        if (!g.out_dir.empty()) cfg.outputs.directory = g.out_dir;
        cfg.validate();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
#ifdef _OPENMP
    if (g.threads > 0) omp_set_num_threads(g.threads);
#endif

    ArtifactSet art(cfg.outputs.directory, cfg.outputs.format);
    art.add_text("config.ini", recorded);
    art.log("command=" + name);
    art.log("scenario=" + cfg.name);
    RunRecord record{name, cfg.name, "ok", std::nullopt, ""};
    Context ctx{cfg, art, out, g.threads};
    try {
        command(ctx);
    } catch (const Error& e) {
        if (e.is_validation()) {
            err << "error: " << e.what() << "\n";
            return kExitValidation;
        }
        record.status = "numerical_failure";
        record.error_code = e.code();
        record.error_message = e.what();
    } catch (const std::exception& e) {
        record.status = "numerical_failure";
        record.error_message = e.what();
    }
    if (record.status != "ok") {
        ojson d;
        d["code"] = record.error_code ? ojson(std::string(to_string(*record.error_code))) : ojson();
        d["message"] = record.error_message;
        art.add_text("diagnostics.json", d.dump(2) + "\n");
        art.log("failure " + record.error_message);
    }
    try {
        const auto manifest = art.commit(record);
        out << "manifest: " << manifest.string() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    if (record.status != "ok") {
        err << "error: " << record.error_message << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Characteristic-geometry and wave toolkit for analogue black holes", "horizonlab"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out_dir, "Output directory (overrides outputs.directory)");
    app.add_option("--tol-scale", g.tol_scale, "Multiply every tolerance by this factor")->check(CLI::PositiveNumber);
    app.add_option("--threads", g.threads, "Worker threads for the wave solver")->check(CLI::NonNegativeNumber);
    app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

    const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands = {
        {"ergosphere", {"Locate the ergosphere", cmd_ergosphere}},
        {"rays", {"Trace null bicharacteristics and planar orbits", cmd_rays}},
        {"horizon", {"Find and classify limit-cycle horizons", cmd_horizon}},
        {"classify", {"Classify horizons and the inner curve", cmd_classify}},
        {"wave", {"Run the wave solver or the configured experiment", cmd_wave}},
        {"dn-compare", {"Compare DN traces of the metric and its perturbation", cmd_dn_compare}},
        {"gauge-test", {"Gradient-flow pair and vortex control", cmd_gauge_test}},
    };
    std::string target;
    std::string chosen;
    Command chosen_fn;
    for (const auto& [name, info] : commands) {
        CLI::App* sub = app.add_subcommand(name, info.first);
        sub->add_option("config", target, "Built-in scenario name or INI path")->required();
        sub->callback([&, name = name, fn = info.second] {
            chosen = name;
            chosen_fn = fn;
        });
    }
    CLI::App* list = app.add_subcommand("list-scenarios", "List built-in scenarios");
    CLI::App* validate = app.add_subcommand("validate", "Load and validate a configuration");
    validate->add_option("config", target, "Built-in scenario name or INI path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (list->parsed()) {
        for (const ScenarioConfig& c : builtin_scenarios()) out << c.name << "\t" << c.description << "\n";
        return kExitOk;
    }
    if (validate->parsed()) {
        try {
            ScenarioConfig cfg = load_scenario(target);
            if (g.tol_scale != 1.0) cfg.scale_tolerances(g.tol_scale);
            cfg.validate();
            out << "ok: " << cfg.name << "\n";
            return kExitOk;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitValidation;
        }
    }
    return execute(chosen, chosen_fn, target, g, out, err);
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace horizonlab
