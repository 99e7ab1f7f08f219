#include "horizonlab/inverse_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "horizonlab/format.hpp"

namespace horizonlab {

double DNTrace::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void DNTrace::write_csv(std::ostream& os) const {
    os << "t,theta,lambda\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (int j = 0; j < ntheta; ++j) {
            os << fmt_double(times[k]) << ',' << fmt_double(2.0 * M_PI * j / ntheta) << ',' << fmt_double(at(k, j))
               << '\n';
        }
    }
}

DNTrace dn_trace(const WaveSolver& solver, const RunResult& run) {
    const AnnularGrid& g = solver.grid();
    const int N = g.Ntheta;
    const double dr = g.dr(), dth = g.dtheta();
    std::vector<double> norm(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        const PolarCoefficients& c = solver.operators().node[g.index(g.Nr, j)];
        if (!(-c.arr > 0.0)) {
            std::ostringstream os;
            os << "-g^{rr} = " << -c.arr << " at theta = " << g.theta(j) << " on the outer rim";
            fail(ErrorCode::NormalizationDomainError, os.str());
        }
        norm[static_cast<std::size_t>(j)] = 1.0 / std::sqrt(-c.arr);
    }
    DNTrace tr;
    tr.ntheta = N;
    tr.forcing_id = solver.source().id;
    tr.times.reserve(run.rim.size());
    tr.values.reserve(run.rim.size() * static_cast<std::size_t>(N));
    for (const RimSnapshot& snap : run.rim) {
        tr.times.push_back(snap.t);
        for (int j = 0; j < N; ++j) {
            const std::size_t js = static_cast<std::size_t>(j);
            const PolarCoefficients& c = solver.operators().node[g.index(g.Nr, j)];
            const double ur = (3.0 * snap.u_outer[js] - 4.0 * snap.u_1[js] + snap.u_2[js]) / (2.0 * dr);
            const double ut = (snap.u_outer[static_cast<std::size_t>((j + 1) % N)] -
                               snap.u_outer[static_cast<std::size_t>((j + N - 1) % N)]) /
                              (2.0 * dth);
            const double rate = solver.rim_rate(snap.t, g.theta(j));
            tr.values.push_back((c.a0r * rate + c.arr * ur + c.art * ut) * norm[js]);
        }
    }
    if (solver.source().boundary_value && !tr.times.empty() && tr.times.back() > 0.0) {
        tr.norm_h1 = std::sqrt(boundary_h1_norm_sq(solver.source().boundary_value, g.r_max, N, tr.times.back(), 400));
    }
    return tr;
}

double max_abs_difference(const DNTrace& a, const DNTrace& b) {
    if (a.ntheta != b.ntheta || a.values.size() != b.values.size()) {
        fail(ErrorCode::InvalidArgument, "DN traces have different shapes");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

// ----------------------------------------------------------- perturbation

void PerturbationSpec::validate() const {
    if (!(inner_radius >= 0.0) || !(outer_radius > inner_radius)) {
        fail(ErrorCode::InvalidPerturbation, "perturbation radii must satisfy 0 <= inner < outer");
    }
    if (!(amplitude >= 0.0 && amplitude < 1.0)) {
        fail(ErrorCode::InvalidPerturbation, "perturbation amplitude must lie in [0, 1) to keep g^{00} > 0");
    }
}

double PerturbationSpec::bump(double r) const {
    double s;
    if (inner_radius == 0.0) {
        s = r / outer_radius;
    } else {
        const double mid = 0.5 * (inner_radius + outer_radius);
        s = std::abs(r - mid) / (0.5 * (outer_radius - inner_radius));
    }
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

SpacetimeMetric perturb_metric(const SpacetimeMetric& base, const PerturbationSpec& p) {
    p.validate();
    if (base.n_space() != 2) fail(ErrorCode::InvalidArgument, "perturbations are defined for 2D metrics");
    SpacetimeMetric::Evaluator eval = [base, p](const Point& x) {
        MetricMatrix g = base(x);
        g(0, 0) *= 1.0 - p.amplitude * p.bump(x.norm());
        return g;
    };
    return SpacetimeMetric(2, eval, base.domain(), {}, base.family() + "+bump");
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& values) {
    if (h.size() != values.size() || h.size() < 2) fail(ErrorCode::InvalidArgument, "order fit needs two samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(values[k] > 0.0) || !(h[k] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double x = std::log(h[k]), y = std::log(values[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ----------------------------------------------------------- lockstep runs

namespace {

struct PairOutcome {
    GridDifference diff;
    DNTrace trace_a, trace_b;
};

RimSnapshot snapshot(const WaveSolver& s) {
    const AnnularGrid& g = s.grid();
    const auto& u = s.state().u;
    auto ring = [&](int i) {
        const auto first = u.begin() + static_cast<long>(g.index(i, 0));
        return std::vector<double>(first, first + g.Ntheta);
    };
    return {s.state().t, ring(g.Nr), ring(g.Nr - 1), ring(g.Nr - 2)};
}

PairOutcome run_lockstep(const SpacetimeMetric& ma, const SpacetimeMetric& mb, const AnnularGrid& grid,
                         const ExperimentOptions& opts, double r_ext, double r_int) {
    const SourceSpec src =
        SourceSpec::windowed_multipole(opts.forcing_amplitude, opts.forcing_m, opts.forcing_duration);
    WaveSolver sa(ma, grid, src, opts.wave);
    WaveSolver sb(mb, grid, src, opts.wave);
    double dt = std::min(sa.default_dt(), sb.default_dt());
    const long steps = static_cast<long>(std::ceil(opts.t_end / dt - 1e-9));
    dt = opts.t_end / static_cast<double>(steps);
    const long every = std::max(1L, std::lround(opts.sample_interval / dt));

    PairOutcome out;
    out.diff.grid = grid;
    out.diff.h = grid.dr();
    out.diff.dt = dt;
    out.diff.steps = steps;
    RunResult ra, rb;
    auto sample = [&]() {
        ra.rim.push_back(snapshot(sa));
        rb.rim.push_back(snapshot(sb));
        const auto& ua = sa.state().u;
        const auto& ub = sb.state().u;
        for (int i = 0; i <= grid.Nr; ++i) {
            const double r = grid.r(i);
            const bool ext = r >= r_ext, in = r <= r_int;
            if (!ext && !in) continue;
            double m = 0.0;
            for (int j = 0; j < grid.Ntheta; ++j) {
                const std::size_t k = grid.index(i, j);
                m = std::max(m, std::abs(ua[k] - ub[k]));
            }
            if (ext) out.diff.exterior_diff = std::max(out.diff.exterior_diff, m);
            if (in) out.diff.interior_diff = std::max(out.diff.interior_diff, m);
        }
    };
    sample();
    for (long s = 1; s <= steps; ++s) {
        sa.step(dt);
        sb.step(dt);
        if (s % every == 0 || s == steps) sample();
    }
    out.trace_a = dn_trace(sa, ra);
    out.trace_b = dn_trace(sb, rb);
    out.diff.dn_diff = max_abs_difference(out.trace_a, out.trace_b);
    return out;
}

nlohmann::ordered_json grid_json(const GridDifference& d) {
    nlohmann::ordered_json j;
    j["Nr"] = d.grid.Nr;
    j["Ntheta"] = d.grid.Ntheta;
    j["h"] = d.h;
    j["dt"] = d.dt;
    j["steps"] = d.steps;
    j["exterior_diff"] = d.exterior_diff;
    j["dn_diff"] = d.dn_diff;
    j["interior_diff"] = d.interior_diff;
    return j;
}

void check_schedule(const ExperimentOptions& opts) {
    if (opts.schedule.size() < 2) fail(ErrorCode::ValidationError, "experiment.schedule needs at least two grids");
    if (!(opts.t_end > 0.0)) fail(ErrorCode::ValidationError, "experiment.t_end must be positive");
    if (!(opts.sample_interval > 0.0)) fail(ErrorCode::ValidationError, "experiment.sample_interval must be positive");
    for (const AnnularGrid& g : opts.schedule) g.validate();
}

}  // namespace

std::string NonuniquenessReport::to_json() const {
    nlohmann::ordered_json j;
    j["horizon_radius"] = horizon_radius;
    j["exterior_radius"] = exterior_radius;
    j["perturbation"] = {{"inner_radius", perturbation.inner_radius},
                         {"outer_radius", perturbation.outer_radius},
                         {"amplitude", perturbation.amplitude}};
    j["control"] = control;
    j["grids"] = nlohmann::ordered_json::array();
    for (const GridDifference& d : grids) j["grids"].push_back(grid_json(d));
    j["order_exterior"] = order_exterior;
    j["order_dn"] = order_dn;
    j["thresholds"] = {{"order_lo", thresholds.order_lo},
                       {"order_hi", thresholds.order_hi},
                       {"interior_ratio", thresholds.interior_ratio}};
    j["exterior_order_ok"] = exterior_order_ok;
    j["dn_order_ok"] = dn_order_ok;
    j["interior_persists"] = interior_persists;
    j["passed"] = passed();
    return j.dump(2) + "\n";
}

NonuniquenessReport nonuniqueness_experiment(const NonuniquenessSetup& setup, const ExperimentOptions& opts) {
    check_schedule(opts);
    setup.perturbation.validate();
    const HorizonReport hr = horizon_report(setup.base, setup.horizon);
    double horizon = -1.0;
    for (const ClassifiedCycle& c : hr.cycles) {
        if (c.hole.kind != HoleKind::BlackHole) continue;
        double rmin = std::numeric_limits<double>::infinity();
        for (const Vec2& p : c.cycle.curve.points()) rmin = std::min(rmin, p.norm());
        horizon = std::max(horizon, rmin);
    }
    if (horizon < 0.0) fail(ErrorCode::NotABlackHole, "base metric has no black-hole cycle in the search window");

    NonuniquenessReport rep;
    rep.horizon_radius = horizon;
    rep.exterior_radius = horizon + setup.exterior_margin;
    rep.perturbation = setup.perturbation;
    rep.control = setup.control;
    for (const AnnularGrid& g : opts.schedule) {
        const double limit = horizon - setup.margin_cells * g.dr();
        if (!setup.control && setup.perturbation.outer_radius > limit) {
            std::ostringstream os;
            os << "support radius " << setup.perturbation.outer_radius << " exceeds horizon " << horizon << " minus "
               << setup.margin_cells << " cells (" << limit << ") on the " << g.Nr << "x" << g.Ntheta << " grid";
            fail(ErrorCode::PerturbationLeak, os.str());
        }
    }
    const SpacetimeMetric perturbed = perturb_metric(setup.base, setup.perturbation);
    for (const AnnularGrid& g : opts.schedule) {
        for (int i = 0; i <= g.Nr; ++i) {
            if (g.r(i) >= setup.perturbation.outer_radius) break;
            for (int j = 0; j < g.Ntheta; ++j) {
                const Point x = point2(g.r(i) * std::cos(g.theta(j)), g.r(i) * std::sin(g.theta(j)));
                const std::string why = lorentz_violation(perturbed(x), 2);
                if (!why.empty()) fail(ErrorCode::InvalidPerturbation, "perturbed metric " + why);
            }
        }
    }

    std::vector<double> hs, ext, dn;
    for (const AnnularGrid& g : opts.schedule) {
        const PairOutcome o = run_lockstep(setup.base, perturbed, g, opts, rep.exterior_radius, horizon);
        rep.grids.push_back(o.diff);
        hs.push_back(o.diff.h);
        ext.push_back(o.diff.exterior_diff);
        dn.push_back(o.diff.dn_diff);
    }
    rep.order_exterior = fitted_order(hs, ext);
    rep.order_dn = fitted_order(hs, dn);
    auto in_band = [&](double p) { return p >= rep.thresholds.order_lo && p <= rep.thresholds.order_hi; };
    rep.exterior_order_ok = in_band(rep.order_exterior);
    rep.dn_order_ok = in_band(rep.order_dn);
    const GridDifference& fine = rep.grids.back();
    rep.interior_persists = fine.interior_diff > rep.thresholds.interior_ratio * fine.exterior_diff;
    return rep;
}

// ------------------------------------------------------------ gradient pair

Potential quadratic_potential(double beta, double r_max) {
    Potential b;
    b.value = [=](const Point& x) { return beta * (r_max * r_max - x.squaredNorm()); };
    b.gradient = [=](const Point& x) -> Point { return -2.0 * beta * x; };
    b.hessian = [=](const Point& x) -> SpatialMatrix {
        return -2.0 * beta * SpatialMatrix::Identity(x.size(), x.size());
    };
    return b;
}

SpacetimeMetric gradient_flow_metric(const Potential& b, double n_index, double sign, double r_min, double r_max) {
    if (!(n_index > 1.0)) fail(ErrorCode::InvalidArgument, "gradient flows need a refraction index above 1");
    if (!b.gradient) fail(ErrorCode::InvalidArgument, "potential gradient is required");
    FlowSpec flow;
    flow.n_space = 2;
    flow.name = sign > 0 ? "grad_b" : "minus_grad_b";
    const double k = sign * flow.c / (n_index * n_index - 1.0);
    flow.velocity = [b, k](const Point& x) -> Point { return k * b.gradient(x); };
    if (b.hessian) flow.velocity_jacobian = [b, k](const Point& x) -> SpatialMatrix { return k * b.hessian(x); };
    flow.domain = Domain::annulus(0.5 * r_min, 2.0 * r_max);
    flow.with_constant_index(n_index);
    return slow_medium_metric(flow);
}

namespace {

GradientPairReport pair_report(const std::string& label, const SpacetimeMetric& plus, const SpacetimeMetric& minus,
                               const ExperimentOptions& opts) {
    GradientPairReport rep;
    rep.label = label;
    std::vector<double> hs, dn;
    for (const AnnularGrid& g : opts.schedule) {
        ExperimentOptions o = opts;
        o.wave.inner = InnerBoundary{};
        o.wave.inner.mode = InnerBoundary::Mode::Dirichlet;
        const PairOutcome out = run_lockstep(plus, minus, g, o, std::numeric_limits<double>::infinity(), -1.0);
        rep.grids.push_back(out.diff);
        hs.push_back(out.diff.h);
        dn.push_back(out.diff.dn_diff);
    }
    rep.order_dn = fitted_order(hs, dn);
    for (std::size_t k = 1; k < dn.size(); ++k) {
        const double rel = dn[k - 1] > 0.0 ? std::abs(dn[k] - dn[k - 1]) / dn[k - 1] : 0.0;
        rep.max_relative_change = std::max(rep.max_relative_change, rel);
    }
    return rep;
}

}  // namespace

std::string GradientPairReport::to_json() const {
    nlohmann::ordered_json j;
    j["label"] = label;
    j["grids"] = nlohmann::ordered_json::array();
    for (const GridDifference& d : grids) {
        j["grids"].push_back({{"Nr", d.grid.Nr}, {"Ntheta", d.grid.Ntheta}, {"h", d.h}, {"dt", d.dt},
                              {"steps", d.steps}, {"dn_diff", d.dn_diff}});
    }
    j["order_dn"] = order_dn;
    j["max_relative_change"] = max_relative_change;
    return j.dump(2) + "\n";
}

GradientPairReport gradient_flow_pair(const Potential& b, double n_index, const ExperimentOptions& opts) {
    check_schedule(opts);
    if (!b.value) fail(ErrorCode::InvalidArgument, "potential value is required");
    const AnnularGrid& g0 = opts.schedule.front();
    for (const AnnularGrid& g : opts.schedule) {
        for (int j = 0; j < 720; ++j) {
            const double th = 2.0 * M_PI * j / 720.0;
            const double v = b.value(point2(g.r_max * std::cos(th), g.r_max * std::sin(th)));
            if (std::abs(v) > 1e-12) {
                std::ostringstream os;
                os << "|b| = " << std::abs(v) << " on the outer rim r = " << g.r_max << " at theta = " << th;
                fail(ErrorCode::BoundaryPotentialNonzero, os.str());
            }
        }
    }
    const SpacetimeMetric plus = gradient_flow_metric(b, n_index, 1.0, g0.r_min, g0.r_max);
    const SpacetimeMetric minus = gradient_flow_metric(b, n_index, -1.0, g0.r_min, g0.r_max);
    return pair_report("gradient", plus, minus, opts);
}

GradientPairReport vortex_flip_control(double B, double n_index, const ExperimentOptions& opts) {
    check_schedule(opts);
    if (!(n_index >= 1.0)) fail(ErrorCode::InvalidArgument, "refraction index must be at least 1");
    auto make = [&](double b) {
        FlowSpec flow = vortex_flow(0.0, b);
        flow.with_constant_index(n_index);
        return slow_medium_metric(flow);
    };
    return pair_report("vortex_control", make(B), make(-B), opts);
}

}  // namespace horizonlab
