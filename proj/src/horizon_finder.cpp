#include "horizonlab/horizon_finder.hpp"

#include <boost/math/tools/roots.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "horizonlab/format.hpp"

namespace horizonlab {

namespace {

std::string angle_text(double th) {
    std::ostringstream os;
    os.precision(12);
    os << th;
    return os.str();
}

Vec2 unit(double th) { return {std::cos(th), std::sin(th)}; }

}  // namespace

ClosedCurve ergosphere_locus(const SpacetimeMetric& metric, const SearchAnnulus& annulus, int probes, double tol) {
    if (metric.n_space() != 2) fail(ErrorCode::InvalidArgument, "ergosphere search needs a 2D metric");
    if (!(annulus.r_lo > 0.0) || !(annulus.r_hi > annulus.r_lo)) {
        fail(ErrorCode::InvalidArgument, "search annulus requires 0 < r_lo < r_hi");
    }
    if (probes < 8) fail(ErrorCode::InvalidArgument, "at least 8 probe rays required");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(probes));
    for (int k = 0; k < probes; ++k) {
        const double th = 2.0 * M_PI * k / probes;
        const Vec2 e = unit(th);
        auto delta = [&](double r) { return spatial_det(metric, as_point(r * e)); };
        double lo = annulus.r_lo, hi = annulus.r_hi;
        double dlo = delta(lo), dhi = delta(hi);
        if (dlo == 0.0) {
            pts.push_back(lo * e);
            continue;
        }
        if (dhi == 0.0) {
            pts.push_back(hi * e);
            continue;
        }
        if ((dlo > 0.0) == (dhi > 0.0)) {
            fail(ErrorCode::NoSignChange, "Delta has no sign change on probe angle " + angle_text(th));
        }
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double dm = delta(mid);
            if (dm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((dm > 0.0) == (dlo > 0.0)) {
                lo = mid;
                dlo = dm;
            } else {
                hi = mid;
            }
        }
        pts.push_back(0.5 * (lo + hi) * e);
    }
    return ClosedCurve(std::move(pts));
}

// ------------------------------------------------------------ return map

namespace {

double polar_angle(const Vec2& x) { return std::atan2(x.y(), x.x()); }

double wrap(double d) {
    while (d > M_PI) d -= 2.0 * M_PI;
    while (d < -M_PI) d += 2.0 * M_PI;
    return d;
}

struct OrbitContext {
    int orientation = 1;
    PlanarFlow flow;
};

OrbitContext make_context(const SpacetimeMetric& metric, const Vec2& x, Family family, const CharTolerances& tol) {
    const int o = frame_orientation(metric, as_point(x), tol);
    return OrbitContext{o, PlanarFlow(metric, family, o, tol)};
}

ReturnResult return_with_flow(const PlanarFlow& flow, const PoincareSection& section, double r,
                              const ReturnOptions& opts, double budget) {
    const Vec2 start = r * unit(section.theta0);
    const Vec2 f0 = flow(start);
    const Vec2 th_hat(-std::sin(section.theta0), std::cos(section.theta0));
    const double ft = f0.dot(th_hat);
    if (ft == 0.0) fail(ErrorCode::NoReturn, "flow tangent to the section");
    const int direction = ft > 0.0 ? 1 : -1;

    PlanarStepper stepper(flow, start, opts.planar);
    double unwrapped = 0.0;
    double prev_angle = polar_angle(start);
    long steps = 0;
    while (true) {
        if (steps++ >= opts.planar.max_steps) fail(ErrorCode::NoReturn, "step budget exhausted");
        const double unwrapped_prev = unwrapped;
        if (!stepper.step(budget)) {
            fail(ErrorCode::NoReturn, "orbit ended (" + to_string(stepper.exit_reason()) + ") before returning");
        }
        const double angle = polar_angle(stepper.x());
        unwrapped += wrap(angle - prev_angle);
        prev_angle = angle;
        if (direction * unwrapped >= 2.0 * M_PI) {
            // Bisect the crossing inside the last step on the turning angle.
            const double h_total = stepper.sigma() - stepper.prev_sigma();
            const double base_angle = polar_angle(stepper.prev_x());
            auto turned = [&](double h) {
                return direction * (unwrapped_prev + wrap(polar_angle(stepper.dense(h)) - base_angle)) - 2.0 * M_PI;
            };
            double lo = 0.0, hi = h_total;
            while (hi - lo > opts.crossing_tol) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (turned(mid) >= 0.0) hi = mid;
                else lo = mid;
            }
            const double h = 0.5 * (lo + hi);
            const Vec2 xc = stepper.dense(h);
            ReturnResult out;
            out.r = xc.dot(unit(section.theta0));
            out.sigma = stepper.prev_sigma() + h;
            out.direction = direction;
            return out;
        }
    }
}

double default_budget(const PoincareSection& section, const ReturnOptions& opts) {
    return opts.sigma_budget > 0.0 ? opts.sigma_budget : 1e3 * 2.0 * section.r_hi;
}

}  // namespace

ReturnResult return_map(const SpacetimeMetric& metric, const PoincareSection& section, double r,
                        const ReturnOptions& opts) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "section radius must be positive");
    const Vec2 start = r * unit(section.theta0);
    OrbitContext ctx = make_context(metric, start, section.family, opts.planar.tol);
    return return_with_flow(ctx.flow, section, r, opts, default_budget(section, opts));
}

namespace {

bool transverse(const PlanarFlow& flow, const PoincareSection& s, double r, double tol) {
    try {
        const Vec2 f = flow(r * unit(s.theta0));
        const Vec2 th_hat(-std::sin(s.theta0), std::cos(s.theta0));
        return std::abs(f.dot(th_hat)) > tol;
    } catch (const Error&) {
        return false;
    }
}

// Repelling cycles are traced with the reversed field so the trace stays on them.
ClosedCurve trace_cycle(const PlanarFlow& forward, const Vec2& start, double period, int samples,
                        const PlanarOptions& popts, bool backward, double& gap) {
    const PlanarFlow flow = backward ? forward.reversed() : forward;
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    pts.push_back(start);
    PlanarStepper stepper(flow, start, popts);
    for (int k = 1; k <= samples; ++k) {
        const double target = period * k / samples;
        while (stepper.sigma() < target) {
            if (!stepper.step(target)) {
                if (stepper.exit_reason() == Termination::ReachedParameterLimit) break;
                fail(ErrorCode::NoReturn, "cycle orbit ended while tracing");
            }
        }
        if (k < samples) pts.push_back(stepper.x());
    }
    gap = (stepper.x() - start).norm();
    if (backward) std::reverse(pts.begin() + 1, pts.end());
    return ClosedCurve(std::move(pts));
}

}  // namespace

std::vector<LimitCycle> find_limit_cycles(const SpacetimeMetric& metric, const PoincareSection& section_in,
                                          const CycleSearchOptions& opts) {
    if (!(section_in.r_hi > section_in.r_lo) || !(section_in.r_lo > 0.0)) {
        fail(ErrorCode::InvalidArgument, "section window requires 0 < r_lo < r_hi");
    }
    const int n = std::max(opts.scan_points, 2);
    std::vector<double> radii(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        radii[static_cast<std::size_t>(i)] = section_in.r_lo + (section_in.r_hi - section_in.r_lo) * (i + 0.5) / n;
    }

    // Orientation from the middle of the window; the frame sign is global on
    // connected ergoregions.
    PoincareSection section = section_in;
    const Vec2 probe = radii[static_cast<std::size_t>(n / 2)] * unit(section.theta0);
    int orientation = 1;
    try {
        orientation = frame_orientation(metric, as_point(probe), opts.ret.planar.tol);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoRealCharacteristics || e.code() == ErrorCode::EvaluationOutsideDomain) return {};
        throw;
    }
    PlanarFlow flow(metric, section.family, orientation, opts.ret.planar.tol);

    auto count_transverse = [&](const PoincareSection& s) {
        int c = 0;
        for (double r : radii) c += transverse(flow, s, r, opts.transversality) ? 1 : 0;
        return c;
    };
    int best = count_transverse(section);
    PoincareSection best_section = section;
    for (int rot = 1; rot < 14 && best < n; ++rot) {
        PoincareSection s = section;
        s.theta0 = section.theta0 + rot * M_PI / 7.0;
        const int c = count_transverse(s);
        if (c > best) {
            best = c;
            best_section = s;
        }
    }
    section = best_section;
    const double budget = default_budget(section, opts.ret);

    auto P = [&](double r) { return return_with_flow(flow, section, r, opts.ret, budget); };
    std::vector<double> F(radii.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!transverse(flow, section, radii[i], opts.transversality)) continue;
        try {
            F[i] = P(radii[i]).r - radii[i];
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoReturn && e.code() != ErrorCode::NoRealCharacteristics &&
                e.code() != ErrorCode::EvaluationOutsideDomain) {
                throw;
            }
        }
    }

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        if (!std::isfinite(F[i]) || !std::isfinite(F[i + 1])) continue;
        if (F[i] == 0.0) {
            roots.push_back(radii[i]);
            continue;
        }
        if ((F[i] > 0.0) == (F[i + 1] > 0.0)) continue;
        try {
            auto g = [&](double r) { return P(r).r - r; };
            boost::uintmax_t iters = 200;
            auto term = [&](double a, double b) { return std::abs(b - a) <= 1e-13 * (1.0 + std::abs(a)); };
            const auto bracket =
                boost::math::tools::toms748_solve(g, radii[i], radii[i + 1], F[i], F[i + 1], term, iters);
            roots.push_back(0.5 * (bracket.first + bracket.second));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoReturn) throw;
        }
    }
    if (!radii.empty() && std::isfinite(F.back()) && F.back() == 0.0) roots.push_back(radii.back());

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || std::abs(r - unique.back()) > opts.dedupe) unique.push_back(r);
    }

    std::vector<LimitCycle> cycles;
    for (double r : unique) {
        const ReturnResult ret = P(r);
        LimitCycle c;
        c.fixed_r = r;
        c.section_theta = section.theta0;
        c.family = section.family;
        c.period_sigma = ret.sigma;
        c.direction = ret.direction;
        c.fixed_point_residual = std::abs(ret.r - r);
        if (c.fixed_point_residual > opts.tol_cycle) continue;
        const double h = 1e-5 * r;
        try {
            c.stability = std::abs((P(r + h).r - P(r - h).r) / (2.0 * h));
        } catch (const Error&) {
            c.stability = std::numeric_limits<double>::quiet_NaN();
        }
        const bool repelling = std::isfinite(c.stability) && c.stability > 1.0;
        c.curve = trace_cycle(flow, r * unit(section.theta0), ret.sigma, opts.curve_samples, opts.ret.planar,
                              repelling, c.closure_gap);
        c.char_residual = characteristic_residual(c.curve, metric);
        cycles.push_back(std::move(c));
    }
    return cycles;
}

HorizonReport horizon_report(const SpacetimeMetric& metric, const HorizonConfig& config) {
    HorizonReport rep;
    rep.ergosphere = ergosphere_locus(metric, config.ergo_annulus, config.ergo_probes);
    rep.ergo_r_min = std::numeric_limits<double>::infinity();
    rep.ergo_r_max = 0.0;
    for (const Vec2& p : rep.ergosphere.points()) {
        rep.ergo_r_min = std::min(rep.ergo_r_min, p.norm());
        rep.ergo_r_max = std::max(rep.ergo_r_max, p.norm());
    }
    const double lo = config.cycle_r_lo > 0.0 ? config.cycle_r_lo : config.ergo_annulus.r_lo;
    const double hi = rep.ergo_r_min - config.cycle_margin;
    if (hi > lo) {
        for (Family fam : {Family::Plus, Family::Minus}) {
            PoincareSection s{config.theta0, lo, hi, fam};
            CycleSearchOptions o = config.search;
            o.ret.planar.tol = config.tol;
            for (LimitCycle& c : find_limit_cycles(metric, s, o)) {
                ClassifiedCycle cc;
                cc.hole = classify_hole(c.curve, metric, config.tol);
                cc.cycle = std::move(c);
                rep.cycles.push_back(std::move(cc));
            }
        }
    }
    std::sort(rep.cycles.begin(), rep.cycles.end(),
              [](const ClassifiedCycle& a, const ClassifiedCycle& b) { return a.cycle.fixed_r < b.cycle.fixed_r; });
    if (config.s1) {
        rep.inner_condition = inner_boundary_condition(metric, *config.s1, config.tol);
        if (config.gordon_flow) rep.gordon_condition = gordon_inner_condition(*config.gordon_flow, *config.s1);
    }
    return rep;
}

std::string HorizonReport::to_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json ergo = ordered_json::array();
    for (const Vec2& p : ergosphere.points()) ergo.push_back({p.x(), p.y()});
    j["ergosphere"] = ergo;
    j["ergosphere_r_min"] = ergo_r_min;
    j["ergosphere_r_max"] = ergo_r_max;
    ordered_json cyc = ordered_json::array();
    for (const ClassifiedCycle& c : cycles) {
        ordered_json e;
        e["fixed_r"] = c.cycle.fixed_r;
        e["section_theta"] = c.cycle.section_theta;
        e["period_sigma"] = c.cycle.period_sigma;
        e["stability"] = std::isfinite(c.cycle.stability) ? ordered_json(c.cycle.stability) : ordered_json();
        e["family"] = to_string(c.cycle.family);
        e["direction"] = c.cycle.direction;
        e["class"] = to_string(c.hole.kind);
        e["margin"] = c.hole.margin;
        e["char_residual"] = c.cycle.char_residual;
        e["fixed_point_residual"] = c.cycle.fixed_point_residual;
        e["closure_gap"] = c.cycle.closure_gap;
        cyc.push_back(e);
    }
    j["cycles"] = cyc;
    if (inner_condition) {
        j["inner_condition"] = to_string(inner_condition->condition);
    } else {
        j["inner_condition"] = nullptr;
    }
    if (gordon_condition) {
        j["gordon_condition"] = {{"condition", to_string(gordon_condition->condition)},
                                 {"min", gordon_condition->min_value},
                                 {"max", gordon_condition->max_value}};
    }
    return j.dump(2) + "\n";
}

}  // namespace horizonlab
