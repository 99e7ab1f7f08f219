#include "horizonlab/bicharacteristics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "horizonlab/format.hpp"

namespace odeint = boost::numeric::odeint;

namespace horizonlab {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::LeftDomain: return "LeftDomain";
        case Termination::MaxSteps: return "MaxSteps";
        case Termination::ReachedTime: return "ReachedTime";
        case Termination::StagnationDetected: return "StagnationDetected";
        case Termination::ReachedParameterLimit: return "ReachedParameterLimit";
        case Termination::LeftErgoregion: return "LeftErgoregion";
        case Termination::ConvergedToCycle: return "ConvergedToCycle";
        case Termination::CovectorBlowUp: return "CovectorBlowUp";
    }
    return "Unknown";
}

namespace {

Eigen::VectorXd full_covector(const PhasePoint& p) {
    Eigen::VectorXd xi(p.xi.size() + 1);
    xi[0] = p.xi0;
    xi.tail(p.xi.size()) = p.xi;
    return xi;
}

bool is_exit(const Error& e) {
    return e.code() == ErrorCode::EvaluationOutsideDomain || e.code() == ErrorCode::NoRealCharacteristics;
}

}  // namespace

double hamiltonian(const SpacetimeMetric& metric, const PhasePoint& p) {
    if (p.x.size() != metric.n_space() || p.xi.size() != metric.n_space()) {
        fail(ErrorCode::InvalidArgument, "phase point dimension does not match metric");
    }
    const Eigen::VectorXd xi = full_covector(p);
    return xi.dot(Eigen::MatrixXd(metric(p.x)) * xi);
}

double RayPath::max_h() const {
    double m = 0.0;
    for (double h : h_residuals) m = std::max(m, std::abs(h));
    return m;
}

void RayPath::write_csv(std::ostream& os) const {
    const int n = samples.empty() ? 2 : static_cast<int>(samples.front().x.size());
    os << "s,x0";
    for (int j = 1; j <= n; ++j) os << ",x" << j;
    os << ",xi0";
    for (int j = 1; j <= n; ++j) os << ",xi" << j;
    os << ",H_residual\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const PhasePoint& p = samples[i];
        os << fmt_double(s[i]) << ',' << fmt_double(p.x0);
        for (int j = 0; j < n; ++j) os << ',' << fmt_double(p.x[j]);
        os << ',' << fmt_double(p.xi0);
        for (int j = 0; j < n; ++j) os << ',' << fmt_double(p.xi[j]);
        os << ',' << fmt_double(h_residuals[i]) << '\n';
    }
}

// ------------------------------------------------------------------ rays

namespace {

using RayState = std::vector<double>;

struct RaySystem {
    const SpacetimeMetric* metric;
    double xi0;
    int n;

    void operator()(const RayState& y, RayState& dy, double /*s*/) const {
        Point x(n);
        Eigen::VectorXd xi(n + 1);
        xi[0] = xi0;
        for (int j = 0; j < n; ++j) {
            x[j] = y[1 + j];
            xi[1 + j] = y[1 + n + j];
        }
        const Eigen::MatrixXd g = (*metric)(x);
        const Eigen::VectorXd gx = g * xi;
        dy.resize(y.size());
        dy[0] = 2.0 * gx[0];
        for (int j = 0; j < n; ++j) dy[1 + j] = 2.0 * gx[1 + j];
        for (int p = 0; p < n; ++p) {
            const Eigen::MatrixXd dg = metric->derivative(x, p);
            dy[1 + n + p] = -xi.dot(dg * xi);
        }
    }
};

PhasePoint unpack(const RayState& y, double xi0, int n) {
    PhasePoint p;
    p.x0 = y[0];
    p.xi0 = xi0;
    p.x = Point(n);
    p.xi = Point(n);
    for (int j = 0; j < n; ++j) {
        p.x[j] = y[1 + j];
        p.xi[j] = y[1 + n + j];
    }
    return p;
}

// Newton steps on the spatial covector toward H = 0; xi_0 is left untouched.
void project_spatial_covector(const SpacetimeMetric& metric, PhasePoint& p, double target) {
    const int n = static_cast<int>(p.x.size());
    const MetricMatrix g = metric(p.x);
    for (int it = 0; it < 3; ++it) {
        const double H = hamiltonian(metric, p);
        if (std::abs(H) <= target) return;
        Eigen::VectorXd grad(n);
        for (int k = 0; k < n; ++k) {
            double v = g(k + 1, 0) * p.xi0;
            for (int j = 0; j < n; ++j) v += g(k + 1, j + 1) * p.xi[j];
            grad[k] = 2.0 * v;
        }
        const double gg = grad.squaredNorm();
        if (gg == 0.0) return;
        for (int k = 0; k < n; ++k) p.xi[k] -= H * grad[k] / gg;
    }
}

}  // namespace

RayPath integrate_ray(const SpacetimeMetric& metric, const PhasePoint& p0, double s_max, const RayOptions& opts) {
    const int n = metric.n_space();
    if (p0.x.size() != n || p0.xi.size() != n) fail(ErrorCode::InvalidArgument, "phase point dimension mismatch");
    if (!(s_max > 0.0)) fail(ErrorCode::InvalidArgument, "s_max must be positive");
    const double h0 = hamiltonian(metric, p0);
    if (std::abs(h0) >= opts.tol_null) fail(ErrorCode::ConstraintDrift, "initial point is not null");

    RaySystem sys{&metric, p0.xi0, n};
    RayState y(1 + 2 * n);
    y[0] = p0.x0;
    for (int j = 0; j < n; ++j) {
        y[1 + j] = p0.x[j];
        y[1 + n + j] = p0.xi[j];
    }

    RayPath path;
    path.s.push_back(0.0);
    path.samples.push_back(p0);
    path.h_residuals.push_back(h0);

    auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<RayState>());
    odeint::runge_kutta_dopri5<RayState> dense_stepper;
    double s = 0.0;
    double dt = opts.initial_step;
    long steps = 0;
    const double xi_limit = opts.max_xi_growth * std::max(p0.xi.norm(), 1e-300);
    const double x0_sign = opts.target_x0 ? (*opts.target_x0 >= p0.x0 ? 1.0 : -1.0) : 0.0;

    while (true) {
        if (steps >= opts.max_steps) {
            path.termination = Termination::MaxSteps;
            break;
        }
        if (s >= s_max) {
            path.termination = Termination::ReachedParameterLimit;
            break;
        }
        RayState dy;
        sys(y, dy, s);
        double speed = 0.0;
        for (double v : dy) speed += v * v;
        if (std::sqrt(speed) < 1e-12) {
            path.termination = Termination::StagnationDetected;
            break;
        }

        const RayState y_prev = y;
        const double s_prev = s;
        double h = std::min(dt, s_max - s);
        bool accepted = false;
        int drift_retries = 0;
        while (!accepted) {
            RayState trial = y_prev;
            double t = s_prev;
            double hh = h;
            odeint::controlled_step_result res;
            try {
                res = stepper.try_step(sys, trial, t, hh);
            } catch (const Error& e) {
                if (!is_exit(e)) throw;
                if (h < 1e-12) break;
                h *= 0.5;
                continue;
            }
            if (res == odeint::fail) {
                h = hh;
                if (h < 1e-15) fail(ErrorCode::ConstraintDrift, "step size underflow");
                continue;
            }
            const PhasePoint pt = unpack(trial, sys.xi0, n);
            const double H = hamiltonian(metric, pt);
            if (std::abs(H) > opts.tol_null && drift_retries < 20) {
                ++drift_retries;
                h *= 0.5;
                continue;
            }
            if (std::abs(H) > 10.0 * opts.tol_null) {
                fail(ErrorCode::ConstraintDrift, "|H| exceeds 10 x tol_null after step reduction");
            }
            y = trial;
            s = t;
            dt = hh;
            accepted = true;
        }
        if (!accepted) {
            path.termination = Termination::LeftDomain;
            break;
        }
        ++steps;

        PhasePoint pt = unpack(y, sys.xi0, n);
        if (opts.project_fraction > 0.0 && std::abs(hamiltonian(metric, pt)) > opts.project_fraction * opts.tol_null) {
            project_spatial_covector(metric, pt, 1e-3 * opts.project_fraction * opts.tol_null);
            for (int j = 0; j < n; ++j) y[1 + n + j] = pt.xi[j];
        }

        if (opts.target_x0 && x0_sign * (pt.x0 - *opts.target_x0) >= 0.0) {
            double lo = 0.0, hi = s - s_prev;
            RayState mid_state = y;
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                dense_stepper.do_step(sys, y_prev, s_prev, mid_state, mid);
                if (x0_sign * (mid_state[0] - *opts.target_x0) >= 0.0) hi = mid;
                else lo = mid;
            }
            dense_stepper.do_step(sys, y_prev, s_prev, mid_state, hi);
            y = mid_state;
            s = s_prev + hi;
            pt = unpack(y, sys.xi0, n);
            path.s.push_back(s);
            path.samples.push_back(pt);
            path.h_residuals.push_back(hamiltonian(metric, pt));
            path.termination = Termination::ReachedTime;
            break;
        }
        path.s.push_back(s);
        path.samples.push_back(pt);
        path.h_residuals.push_back(hamiltonian(metric, pt));
        if (pt.xi.norm() > xi_limit) {
            path.termination = Termination::CovectorBlowUp;
            break;
        }
    }
    return path;
}

// --------------------------------------------------------- planar orbits

PlanarFlow::PlanarFlow(const SpacetimeMetric& metric, Family family, int orientation, CharTolerances tol)
    : metric_(&metric), family_(family), orientation_(orientation), tol_(tol) {
    if (metric.n_space() != 2) fail(ErrorCode::InvalidArgument, "planar flow needs a 2D metric");
    if (orientation != 1 && orientation != -1) fail(ErrorCode::InvalidArgument, "orientation must be +1 or -1");
}

Vec2 PlanarFlow::operator()(const Vec2& x) const {
    const FramePair f = char_frames(*metric_, as_point(x), orientation_, tol_);
    return sign_ * (family_ == Family::Plus ? f.f_plus : f.f_minus);
}

PlanarFlow PlanarFlow::reversed() const {
    PlanarFlow out = *this;
    out.sign_ = -sign_;
    return out;
}

namespace {

using PlanarState = std::array<double, 2>;

struct PlanarSystem {
    const PlanarFlow* flow;
    void operator()(const PlanarState& y, PlanarState& dy, double /*sigma*/) const {
        const Vec2 f = (*flow)(Vec2(y[0], y[1]));
        dy[0] = f.x();
        dy[1] = f.y();
    }
};

}  // namespace

PlanarStepper::PlanarStepper(const PlanarFlow& flow, Vec2 x, const PlanarOptions& opts)
    : flow_(&flow), opts_(opts), x_(x), x_prev_(x), dt_(opts.initial_step) {
    (void)(*flow_)(x_);
}

bool PlanarStepper::step(double sigma_limit) {
    auto stepper = odeint::make_controlled(opts_.atol, opts_.rtol, odeint::runge_kutta_dopri5<PlanarState>());
    PlanarSystem sys{flow_};
    const bool limited = sigma_limit - sigma_ < dt_;
    double h = std::min(dt_, sigma_limit - sigma_);
    while (true) {
        if (!(h > 0.0)) {
            exit_ = Termination::ReachedParameterLimit;
            return false;
        }
        PlanarState y{x_.x(), x_.y()};
        double t = sigma_;
        double hh = h;
        odeint::controlled_step_result res;
        try {
            res = stepper.try_step(sys, y, t, hh);
        } catch (const Error& e) {
            if (!is_exit(e)) throw;
            if (h < opts_.boundary_tol) {
                exit_ = e.code() == ErrorCode::EvaluationOutsideDomain ? Termination::LeftDomain
                                                                       : Termination::LeftErgoregion;
                return false;
            }
            h *= 0.5;
            continue;
        }
        if (res == odeint::fail) {
            h = hh;
            if (h < 1e-16) fail(ErrorCode::FrameDiscontinuity, "step size underflow in planar orbit");
            continue;
        }
        const Vec2 f_old = (*flow_)(x_);
        const Vec2 x_new(y[0], y[1]);
        const Vec2 f_new = (*flow_)(x_new);
        if (f_old.dot(f_new) < 0.0) {
            if (h > opts_.boundary_tol) {
                h *= 0.5;
                continue;
            }
            fail(ErrorCode::FrameDiscontinuity, "frame reverses between (" + fmt_double(x_.x()) + ", " +
                                                    fmt_double(x_.y()) + ") and (" + fmt_double(x_new.x()) +
                                                    ", " + fmt_double(x_new.y()) + ")");
        }
        x_prev_ = x_;
        sigma_prev_ = sigma_;
        x_ = x_new;
        sigma_ = t;
        if (!limited) dt_ = hh;
        return true;
    }
}

Vec2 PlanarStepper::dense(double h) const {
    odeint::runge_kutta_dopri5<PlanarState> st;
    PlanarSystem sys{flow_};
    PlanarState in{x_prev_.x(), x_prev_.y()};
    PlanarState out{};
    st.do_step(sys, in, sigma_prev_, out, h);
    return {out[0], out[1]};
}

void PlanarOrbit::write_csv(std::ostream& os) const {
    os << "sigma,x1,x2,r,theta,family\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec2& p = samples[i];
        os << fmt_double(sigma[i]) << ',' << fmt_double(p.x()) << ',' << fmt_double(p.y()) << ','
           << fmt_double(p.norm()) << ',' << fmt_double(std::atan2(p.y(), p.x())) << ',' << to_string(family)
           << '\n';
    }
}

namespace {

double time_rate_at(const SpacetimeMetric& metric, const Vec2& x, Family family, int orientation,
                    const CharTolerances& tol, bool& on_ergosphere) {
    const Point p = as_point(x);
    const MetricMatrix g = metric(p);
    const NullDirectionPair pair = spatial_null_covectors(metric, p, tol);
    const Vec2& xi = family == Family::Plus ? pair.xi_plus : pair.xi_minus;
    const Eigen::Matrix2d G = g.bottomRightCorner(2, 2);
    const Vec2 g0(g(0, 1), g(0, 2));
    const double dx0 = g0.dot(xi);
    if (std::abs(dx0) <= 1e-14) fail(ErrorCode::ZeroTimeRate, "dx0/ds vanishes on the orbit");
    const FramePair fr = char_frames(metric, p, orientation, tol);
    const Vec2& f = family == Family::Plus ? fr.f_plus : fr.f_minus;
    const Vec2 u = G * xi;
    on_ergosphere = u.norm() <= 1e-14 * (1.0 + G.norm());
    return on_ergosphere ? 0.0 : u.dot(f) / dx0;
}

}  // namespace

PlanarOrbit integrate_planar_orbit(const SpacetimeMetric& metric, const Point& x_start, Family family,
                                   double sigma_max, const PlanarOptions& opts) {
    if (!(sigma_max > 0.0)) fail(ErrorCode::InvalidArgument, "sigma_max must be positive");
    (void)spatial_null_covectors(metric, x_start, opts.tol);
    PlanarOrbit orbit;
    orbit.family = family;
    orbit.orientation = frame_orientation(metric, x_start, opts.tol);
    PlanarFlow flow(metric, family, orbit.orientation, opts.tol);
    PlanarStepper stepper(flow, as_vec2(x_start), opts);

    orbit.sigma.push_back(0.0);
    orbit.samples.push_back(stepper.x());

    auto lift = [&](const Vec2& x) {
        bool on = false;
        const double rate = time_rate_at(metric, x, family, orbit.orientation, opts.tol, on);
        return on ? std::numeric_limits<double>::quiet_NaN() : 1.0 / rate;
    };
    double prev_dx0 = lift(stepper.x());

    double unwrapped = 0.0;
    double prev_angle = std::atan2(stepper.x().y(), stepper.x().x());
    int turns = 0;
    double last_turn_r = std::numeric_limits<double>::quiet_NaN();

    long steps = 0;
    while (true) {
        if (steps >= opts.max_steps) {
            orbit.termination = Termination::MaxSteps;
            break;
        }
        if (!stepper.step(sigma_max)) {
            orbit.termination = stepper.exit_reason();
            break;
        }
        ++steps;
        orbit.sigma.push_back(stepper.sigma());
        orbit.samples.push_back(stepper.x());

        const double dx0 = lift(stepper.x());
        if (std::isfinite(prev_dx0) && std::isfinite(dx0)) {
            orbit.x0_lift += 0.5 * (prev_dx0 + dx0) * (stepper.sigma() - stepper.prev_sigma());
        }
        prev_dx0 = dx0;

        if (opts.stop_on_cycle) {
            const double angle = std::atan2(stepper.x().y(), stepper.x().x());
            double d = angle - prev_angle;
            if (d > M_PI) d -= 2.0 * M_PI;
            if (d < -M_PI) d += 2.0 * M_PI;
            unwrapped += d;
            prev_angle = angle;
            const int k = static_cast<int>(std::floor(std::abs(unwrapped) / (2.0 * M_PI)));
            if (k > turns) {
                turns = k;
                const double r = stepper.x().norm();
                if (std::isfinite(last_turn_r) && std::abs(r - last_turn_r) < opts.cycle_tol) {
                    orbit.termination = Termination::ConvergedToCycle;
                    break;
                }
                last_turn_r = r;
            }
        }
    }
    return orbit;
}

TimeRates lift_time_direction(const SpacetimeMetric& metric, const PlanarOrbit& orbit, const CharTolerances& tol) {
    TimeRates out;
    out.rates.reserve(orbit.samples.size());
    for (const Vec2& x : orbit.samples) {
        bool on = false;
        const double r = time_rate_at(metric, x, orbit.family, orbit.orientation, tol, on);
        out.rates.push_back(r);
        if (on || r == 0.0) ++out.zero;
        else if (r > 0.0) ++out.positive;
        else ++out.negative;
    }
    return out;
}

}  // namespace horizonlab
