#include "horizonlab/wave_fdtd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "horizonlab/format.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace horizonlab {

void AnnularGrid::validate() const {
    if (Nr < 4) fail(ErrorCode::ValidationError, "grid.Nr must be at least 4");
    if (Ntheta < 8) fail(ErrorCode::ValidationError, "grid.Ntheta must be at least 8");
    if (!(r_min > 0.0)) fail(ErrorCode::ValidationError, "grid.r_min must be positive");
    if (!(r_max > r_min)) fail(ErrorCode::ValidationError, "grid.r_max must exceed grid.r_min");
}

AnnularGrid AnnularGrid::refined(int factor) const {
    AnnularGrid g = *this;
    g.Nr *= factor;
    g.Ntheta *= factor;
    return g;
}

PolarCoefficients polar_coefficients(const SpacetimeMetric& metric, double r, double theta) {
    if (metric.n_space() != 2) fail(ErrorCode::InvalidArgument, "polar solver needs a 2D metric");
    const double c = std::cos(theta), sn = std::sin(theta);
    const MetricMatrix g = metric(point2(r * c, r * sn));
    const double det = g.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) {
        std::ostringstream os;
        os << "det g^{jk} = " << det << " at r = " << r << ", theta = " << theta;
        fail(ErrorCode::SingularMetric, os.str());
    }
    const Eigen::Vector2d rh(c, sn), th(-sn, c);
    const Eigen::Matrix2d G = g.bottomRightCorner(2, 2);
    const Eigen::Vector2d g0(g(0, 1), g(0, 2));
    PolarCoefficients p;
    p.s = r / std::sqrt(det);
    p.a00 = g(0, 0);
    p.a0r = g0.dot(rh);
    p.a0t = g0.dot(th) / r;
    p.arr = rh.dot(G * rh);
    p.art = rh.dot(G * th) / r;
    p.att = th.dot(G * th) / (r * r);
    return p;
}

namespace {

// Largest |tau| over unit covectors xi of g00 tau^2 + 2 tau (g0.xi) + xi.G.xi = 0.
double speed_bound(const SpacetimeMetric& metric, double r, double theta) {
    const MetricMatrix g = metric(point2(r * std::cos(theta), r * std::sin(theta)));
    const double g00 = g(0, 0);
    auto root = [&](double a) {
        const double c = std::cos(a), s = std::sin(a);
        const double b = g(0, 1) * c + g(0, 2) * s;
        const double q = g(1, 1) * c * c + 2.0 * g(1, 2) * c * s + g(2, 2) * s * s;
        return (std::abs(b) + std::sqrt(std::max(b * b - g00 * q, 0.0))) / g00;
    };
    constexpr int samples = 48;
    const double da = M_PI / samples;
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < samples; ++k) {
        const double v = root(k * da);
        if (v > best_val) best_val = v, best = k;
    }
    double lo = (best - 1) * da, hi = (best + 1) * da;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (root(m1) < root(m2)) lo = m1;
        else hi = m2;
    }
    return std::max(best_val, root(0.5 * (lo + hi)));
}

struct KForm {
    double rr, rt, tt;
};

KForm k_form(const PolarCoefficients& p) {
    return {p.s * (p.arr - p.a0r * p.a0r / p.a00), p.s * (p.art - p.a0r * p.a0t / p.a00),
            p.s * (p.att - p.a0t * p.a0t / p.a00)};
}

}  // namespace

OperatorBundle first_order_reduce(const SpacetimeMetric& metric, const AnnularGrid& grid, double min_wavelength,
                                  bool strict) {
    grid.validate();
    OperatorBundle ops;
    ops.grid = grid;
    const std::size_t n = grid.nodes();
    ops.node.resize(n);
    ops.inv_sa00.resize(n);
    ops.beta_r.resize(n);
    ops.beta_t.resize(n);
    ops.k_rr.resize(n);
    ops.k_rt.resize(n);
    ops.k_tt.resize(n);
    ops.k_tt_half.resize(n);
    ops.speed.resize(n);
    ops.k_rr_half.resize(static_cast<std::size_t>(grid.Nr) * static_cast<std::size_t>(grid.Ntheta));
    for (int i = 0; i <= grid.Nr; ++i) {
        const double r = grid.r(i);
        for (int j = 0; j < grid.Ntheta; ++j) {
            const double th = grid.theta(j);
            const std::size_t k = grid.index(i, j);
            const PolarCoefficients p = polar_coefficients(metric, r, th);
            if (!(p.a00 > 0.0)) fail(ErrorCode::SingularMetric, "g^{00} <= 0 on the grid");
            ops.node[k] = p;
            ops.inv_sa00[k] = 1.0 / (p.s * p.a00);
            ops.beta_r[k] = p.a0r / p.a00;
            ops.beta_t[k] = p.a0t / p.a00;
            const KForm kf = k_form(p);
            ops.k_rr[k] = kf.rr;
            ops.k_rt[k] = kf.rt;
            ops.k_tt[k] = kf.tt;
            ops.k_tt_half[k] = k_form(polar_coefficients(metric, r, th + 0.5 * grid.dtheta())).tt;
            if (i < grid.Nr) ops.k_rr_half[k] = k_form(polar_coefficients(metric, r + 0.5 * grid.dr(), th)).rr;
            ops.speed[k] = speed_bound(metric, r, th);
        }
    }
    if (min_wavelength > 0.0) {
        const double h = std::max(grid.dr(), grid.r_max * grid.dtheta());
        const double ppw = min_wavelength / h;
        if (ppw < 8.0) {
            std::ostringstream os;
            os << "only " << ppw << " points per shortest wavelength (8 advised)";
            if (strict) fail(ErrorCode::GridTooCoarse, os.str());
            ops.advisories.push_back("GridTooCoarse: " + os.str());
        }
    }
    return ops;
}

double cfl_dt(const OperatorBundle& ops, double safety) {
    const AnnularGrid& g = ops.grid;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= g.Nr; ++i) {
        const double cell = std::min(g.dr(), g.r(i) * g.dtheta());
        for (int j = 0; j < g.Ntheta; ++j) best = std::min(best, cell / ops.speed[g.index(i, j)]);
    }
    return safety * best;
}

// ---------------------------------------------------------------- sources

SourceSpec SourceSpec::windowed_multipole(double amplitude, int m, double duration) {
    if (!(duration > 0.0)) fail(ErrorCode::ValidationError, "source.duration must be positive");
    SourceSpec s;
    s.kind = Kind::BoundaryDirichlet;
    s.support_end = duration;
    s.id = "multipole_m" + std::to_string(m);
    s.boundary_value = [=](double t, double th) {
        if (t <= 0.0 || t >= duration) return 0.0;
        const double sw = std::sin(M_PI * t / duration);
        return amplitude * sw * sw * sw * sw * std::cos(m * th);
    };
    s.boundary_rate = [=](double t, double th) {
        if (t <= 0.0 || t >= duration) return 0.0;
        const double a = M_PI * t / duration;
        const double sw = std::sin(a);
        return amplitude * 4.0 * sw * sw * sw * std::cos(a) * (M_PI / duration) * std::cos(m * th);
    };
    return s;
}

SourceSpec SourceSpec::pulse(GaussianPulse p) {
    if (!(p.width > 0.0)) fail(ErrorCode::ValidationError, "source.width must be positive");
    SourceSpec s;
    s.kind = Kind::InteriorPulse;
    s.pulses.push_back(p);
    s.support_end = 0.0;
    s.id = "pulse";
    return s;
}

// ------------------------------------------------------------------ solver

WaveSolver::WaveSolver(const SpacetimeMetric& metric, const AnnularGrid& grid, SourceSpec source,
                       WaveOptions options)
    : ops_(first_order_reduce(metric, grid, options.min_wavelength, options.strict_resolution)),
      source_(std::move(source)),
      opts_(std::move(options)) {
    if (!(opts_.ko_eps >= 0.0)) fail(ErrorCode::ValidationError, "wave.ko_eps must be non-negative");
    cfl_limit_ = cfl_dt(ops_, 1.0);
    const std::size_t n = ops_.grid.nodes();
    state_.u.assign(n, 0.0);
    state_.pi.assign(n, 0.0);
    for (auto* v : {&k1u_, &k1p_, &k2u_, &k2p_, &k3u_, &k3p_, &k4u_, &k4p_, &tu_, &tp_, &ur_, &ut_, &flux_r_,
                     &flux_t_, &adv_r_, &adv_t_}) v->assign(n, 0.0);
    for (const SeparableTerm& term : source_.volume_terms) {
        if (!term.time || !term.space) fail(ErrorCode::InvalidArgument, "volume source term is incomplete");
        std::vector<double> sampled(n);
        for (int i = 0; i <= ops_.grid.Nr; ++i) {
            for (int j = 0; j < ops_.grid.Ntheta; ++j) {
                sampled[ops_.grid.index(i, j)] = term.space(ops_.grid.r(i), ops_.grid.theta(j));
            }
        }
        volume_space_.push_back(std::move(sampled));
    }
    volume_time_.assign(volume_space_.size(), 0.0);
    initialize_pulses();
    apply_boundaries(state_.u, state_.pi, 0.0);
}

void WaveSolver::initialize_pulses() {
    if (source_.pulses.empty()) return;
    const AnnularGrid& g = ops_.grid;
    for (int i = 0; i <= g.Nr; ++i) {
        const double r = g.r(i);
        for (int j = 0; j < g.Ntheta; ++j) {
            const double th = g.theta(j);
            const Vec2 x(r * std::cos(th), r * std::sin(th));
            const Vec2 rh(std::cos(th), std::sin(th)), tv(-std::sin(th), std::cos(th));
            double u = 0.0, ut = 0.0;
            Vec2 grad = Vec2::Zero();
            for (const GaussianPulse& p : source_.pulses) {
                const Vec2 d = x - p.center;
                const double e = std::exp(-d.squaredNorm() / (p.width * p.width));
                u += p.amplitude * e;
                ut += p.rate_amplitude * e;
                grad += -2.0 * d / (p.width * p.width) * p.amplitude * e;
            }
            const std::size_t k = g.index(i, j);
            const PolarCoefficients& c = ops_.node[k];
            state_.u[k] = u;
            state_.pi[k] = c.s * (c.a00 * ut + c.a0r * grad.dot(rh) + c.a0t * grad.dot(tv) * r);
        }
    }
}

void WaveSolver::set_state(std::vector<double> u, std::vector<double> pi, double t) {
    if (u.size() != ops_.grid.nodes() || pi.size() != ops_.grid.nodes()) {
        fail(ErrorCode::InvalidArgument, "state arrays do not match the grid");
    }
    state_.u = std::move(u);
    state_.pi = std::move(pi);
    state_.t = t;
    apply_boundaries(state_.u, state_.pi, t);
}

double WaveSolver::rim_value(double t, double theta) const {
    return source_.boundary_value ? source_.boundary_value(t, theta) : 0.0;
}

double WaveSolver::rim_rate(double t, double theta) const {
    return source_.boundary_rate ? source_.boundary_rate(t, theta) : 0.0;
}

double WaveSolver::u_r(const std::vector<double>& u, int i, int j) const {
    const AnnularGrid& g = ops_.grid;
    const double idr = 1.0 / g.dr();
    if (i == 0) return (-3.0 * u[g.index(0, j)] + 4.0 * u[g.index(1, j)] - u[g.index(2, j)]) * 0.5 * idr;
    if (i == g.Nr) {
        return (3.0 * u[g.index(g.Nr, j)] - 4.0 * u[g.index(g.Nr - 1, j)] + u[g.index(g.Nr - 2, j)]) * 0.5 * idr;
    }
    return (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) * 0.5 * idr;
}

double WaveSolver::u_theta(const std::vector<double>& u, int i, int j) const {
    const AnnularGrid& g = ops_.grid;
    const int N = g.Ntheta;
    return (u[g.index(i, (j + 1) % N)] - u[g.index(i, (j + N - 1) % N)]) * 0.5 / g.dtheta();
}

void WaveSolver::apply_boundaries(std::vector<double>& u, std::vector<double>& pi, double t) const {
    const AnnularGrid& g = ops_.grid;
    const int N = g.Ntheta;
    const int M = g.Nr;
    for (int j = 0; j < N; ++j) u[g.index(M, j)] = rim_value(t, g.theta(j));
    for (int j = 0; j < N; ++j) {
        const std::size_t k = g.index(M, j);
        const PolarCoefficients& c = ops_.node[k];
        pi[k] = c.s * (c.a00 * rim_rate(t, g.theta(j)) + c.a0r * u_r(u, M, j) + c.a0t * u_theta(u, M, j));
    }
    switch (opts_.inner.mode) {
        case InnerBoundary::Mode::Outflow:
            for (int j = 0; j < N; ++j) {
                const std::size_t k0 = g.index(0, j), k1 = g.index(1, j), k2 = g.index(2, j), k3 = g.index(3, j);
                u[k0] = 3.0 * u[k1] - 3.0 * u[k2] + u[k3];
                pi[k0] = 3.0 * pi[k1] - 3.0 * pi[k2] + pi[k3];
            }
            break;
        case InnerBoundary::Mode::Dirichlet: {
            for (int j = 0; j < N; ++j) {
                u[g.index(0, j)] = opts_.inner.value ? opts_.inner.value(t, g.theta(j)) : 0.0;
            }
            for (int j = 0; j < N; ++j) {
                const std::size_t k = g.index(0, j);
                const PolarCoefficients& c = ops_.node[k];
                const double rate = opts_.inner.rate ? opts_.inner.rate(t, g.theta(j)) : 0.0;
                pi[k] = c.s * (c.a00 * rate + c.a0r * u_r(u, 0, j) + c.a0t * u_theta(u, 0, j));
            }
            break;
        }
        case InnerBoundary::Mode::Inflow:
            for (int j = 0; j < N; ++j) {
                const double th = g.theta(j);
                u[g.index(0, j)] = opts_.inner.value ? opts_.inner.value(t, th) : 0.0;
                pi[g.index(0, j)] = opts_.inner.momentum ? opts_.inner.momentum(t, th) : 0.0;
            }
            break;
    }
}

void WaveSolver::rhs(const std::vector<double>& u, const std::vector<double>& pi, double t, std::vector<double>& du,
                     std::vector<double>& dpi) {
    const AnnularGrid& g = ops_.grid;
    const int N = g.Ntheta;
    const int M = g.Nr;
    const double dr = g.dr(), dth = g.dtheta();
    const double h_r = 0.5 / dr, h_t = 0.5 / dth;
    const double idr2 = 1.0 / (dr * dr), idt2 = 1.0 / (dth * dth);
    const double eps = opts_.ko_eps;
    const double* U = u.data();
    const double* P = pi.data();
    const double* br = ops_.beta_r.data();
    const double* bt = ops_.beta_t.data();
    const double* krt = ops_.k_rt.data();
    const double* krh = ops_.k_rr_half.data();
    const double* kth = ops_.k_tt_half.data();
    const double* isa = ops_.inv_sa00.data();
    double* UR = ur_.data();
    double* UT = ut_.data();
    double* FR = flux_r_.data();
    double* FT = flux_t_.data();
    double* AR = adv_r_.data();
    double* AT = adv_t_.data();
    double* DU = du.data();
    double* DP = dpi.data();
    const std::size_t n_terms = volume_space_.size();
    for (std::size_t q = 0; q < n_terms; ++q) volume_time_[q] = source_.volume_terms[q].time(t);

    for (int j = 0; j < N; ++j) {
        DU[g.index(0, j)] = DP[g.index(0, j)] = 0.0;
        DU[g.index(M, j)] = DP[g.index(M, j)] = 0.0;
    }

#ifdef _OPENMP
    const int nthreads = opts_.threads > 0 ? opts_.threads : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
#endif
    {
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int i = 0; i <= M; ++i) {
            const std::size_t row = static_cast<std::size_t>(i) * N;
            for (int j = 0; j < N; ++j) {
                const int jp = (j + 1 == N) ? 0 : j + 1;
                const int jm = (j == 0) ? N - 1 : j - 1;
                const std::size_t k = row + j;
                const double ut = (U[row + jp] - U[row + jm]) * h_t;
                const double ur = (i > 0 && i < M) ? (U[k + N] - U[k - N]) * h_r : 0.0;
                UT[k] = ut;
                UR[k] = ur;
                FR[k] = krt[k] * ut;
                FT[k] = krt[k] * ur;
                AR[k] = br[k] * P[k];
                AT[k] = bt[k] * P[k];
            }
        }

#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int i = 1; i < M; ++i) {
            const double r = g.r(i);
            const std::size_t row = static_cast<std::size_t>(i) * N;
            const std::size_t up = row + N, dn = row - N;
            const double ko_r = (i >= 2 && i <= M - 2) ? eps / (16.0 * dr) : 0.0;
            const double ko_t = eps / (16.0 * r * dth);
            for (int j = 0; j < N; ++j) {
                const int jp = (j + 1 == N) ? 0 : j + 1;
                const int jm = (j == 0) ? N - 1 : j - 1;
                const int jp2 = (jp + 1 == N) ? 0 : jp + 1;
                const int jm2 = (jm == 0) ? N - 1 : jm - 1;
                const std::size_t k = row + j;
                double d_u = isa[k] * P[k] - br[k] * UR[k] - bt[k] * UT[k];
                const double adv = (AR[up + j] - AR[dn + j]) * h_r + (AT[row + jp] - AT[row + jm]) * h_t;
                const double diag_r = (krh[k] * (U[up + j] - U[k]) - krh[dn + j] * (U[k] - U[dn + j])) * idr2;
                const double diag_t =
                    (kth[k] * (U[row + jp] - U[k]) - kth[row + jm] * (U[k] - U[row + jm])) * idt2;
                const double cross = (FR[up + j] - FR[dn + j]) * h_r + (FT[row + jp] - FT[row + jm]) * h_t;
                double d_p = -adv - diag_r - diag_t - cross;
                for (std::size_t q = 0; q < n_terms; ++q) d_p += volume_time_[q] * volume_space_[q][k];

                d_u -= ko_t * (U[row + jp2] - 4.0 * U[row + jp] + 6.0 * U[k] - 4.0 * U[row + jm] + U[row + jm2]);
                d_p -= ko_t * (P[row + jp2] - 4.0 * P[row + jp] + 6.0 * P[k] - 4.0 * P[row + jm] + P[row + jm2]);
                if (ko_r > 0.0) {
                    const std::size_t up2 = up + N, dn2 = dn - N;
                    d_u -= ko_r * (U[up2 + j] - 4.0 * U[up + j] + 6.0 * U[k] - 4.0 * U[dn + j] + U[dn2 + j]);
                    d_p -= ko_r * (P[up2 + j] - 4.0 * P[up + j] + 6.0 * P[k] - 4.0 * P[dn + j] + P[dn2 + j]);
                }
                DU[k] = d_u;
                DP[k] = d_p;
            }
        }
    }
}

void WaveSolver::step(double dt) {
    if (!(dt > 0.0) || dt > cfl_limit_ * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "dt = " << dt << " outside (0, " << cfl_limit_ << "]";
        fail(ErrorCode::CFLViolation, os.str());
    }
    const std::size_t n = state_.u.size();
    const double t = state_.t;
    std::vector<double>& u = state_.u;
    std::vector<double>& p = state_.pi;

    rhs(u, p, t, k1u_, k1p_);
    for (std::size_t k = 0; k < n; ++k) {
        tu_[k] = u[k] + 0.5 * dt * k1u_[k];
        tp_[k] = p[k] + 0.5 * dt * k1p_[k];
    }
    apply_boundaries(tu_, tp_, t + 0.5 * dt);
    rhs(tu_, tp_, t + 0.5 * dt, k2u_, k2p_);
    for (std::size_t k = 0; k < n; ++k) {
        tu_[k] = u[k] + 0.5 * dt * k2u_[k];
        tp_[k] = p[k] + 0.5 * dt * k2p_[k];
    }
    apply_boundaries(tu_, tp_, t + 0.5 * dt);
    rhs(tu_, tp_, t + 0.5 * dt, k3u_, k3p_);
    for (std::size_t k = 0; k < n; ++k) {
        tu_[k] = u[k] + dt * k3u_[k];
        tp_[k] = p[k] + dt * k3p_[k];
    }
    apply_boundaries(tu_, tp_, t + dt);
    rhs(tu_, tp_, t + dt, k4u_, k4p_);
    const double w = dt / 6.0;
    bool finite = true;
    for (std::size_t k = 0; k < n; ++k) {
        u[k] += w * (k1u_[k] + 2.0 * k2u_[k] + 2.0 * k3u_[k] + k4u_[k]);
        p[k] += w * (k1p_[k] + 2.0 * k2p_[k] + 2.0 * k3p_[k] + k4p_[k]);
        finite = finite && std::isfinite(u[k]) && std::isfinite(p[k]);
    }
    state_.t = t + dt;
    apply_boundaries(u, p, state_.t);
    if (!finite) {
        std::ostringstream os;
        os << "non-finite field at t = " << state_.t;
        fail(ErrorCode::NonFiniteField, os.str());
    }
}

EnergySample WaveSolver::energy(const std::vector<double>& u, const std::vector<double>& pi, double t) const {
    const AnnularGrid& g = ops_.grid;
    const int N = g.Ntheta;
    const int M = g.Nr;
    std::vector<double> row_sum(static_cast<std::size_t>(M + 1), 0.0);
    const double idr = 1.0 / g.dr(), idt = 1.0 / g.dtheta();
#ifdef _OPENMP
    const int nthreads = opts_.threads > 0 ? opts_.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
#endif
    for (int i = 0; i <= M; ++i) {
        const double wr = (i == 0 || i == M) ? 0.5 : 1.0;
        double acc = 0.0;
        for (int j = 0; j < N; ++j) {
            const int jp = (j + 1) % N;
            const std::size_t k = g.index(i, j);
            const PolarCoefficients& c = ops_.node[k];
            const double ur = u_r(u, i, j);
            const double ut = u_theta(u, i, j);
            const double hu = c.a0r * ur + c.a0t * ut;
            // Diagonal parts use one-sided differences on half cells shared between neighbouring rows.
            double diag_r = 0.0;
            if (i < M) {
                const std::size_t kp = g.index(i + 1, j);
                const double d = (u[kp] - u[k]) * idr;
                diag_r += 0.25 * (ops_.node[kp].s * ops_.node[kp].arr + c.s * c.arr) * d * d;
            }
            if (i > 0) {
                const std::size_t km = g.index(i - 1, j);
                const double d = (u[k] - u[km]) * idr;
                diag_r += 0.25 * (ops_.node[km].s * ops_.node[km].arr + c.s * c.arr) * d * d;
            }
            const std::size_t kq = g.index(i, jp);
            const double dq = (u[kq] - u[k]) * idt;
            const double diag_t = 0.5 * (ops_.node[kq].s * ops_.node[kq].att + c.s * c.att) * dq * dq;
            acc += wr * (pi[k] * pi[k] / c.s + c.s * (hu * hu - 2.0 * c.art * ur * ut) - diag_t) - diag_r;
        }
        row_sum[static_cast<std::size_t>(i)] = acc * g.dr() * g.dtheta();
    }
    EnergySample e;
    e.t = t;
    for (int i = 0; i <= M; ++i) {
        const double r = g.r(i);
        const double v = row_sum[static_cast<std::size_t>(i)];
        e.total += v;
        if (r >= opts_.r_exterior) e.exterior += v;
        if (r <= opts_.r_interior) e.interior += v;
    }
    double flux = 0.0;
    for (int j = 0; j < N; ++j) {
        const std::size_t k = g.index(M, j);
        const PolarCoefficients& c = ops_.node[k];
        const double rate = rim_rate(t, g.theta(j));
        flux += c.s * (c.a0r * rate + c.arr * u_r(u, M, j) + c.art * u_theta(u, M, j)) * rate * g.dtheta();
    }
    e.boundary_flux = flux;
    return e;
}

void WaveSolver::record_energy() { state_.energy_history.push_back(energy(state_.u, state_.pi, state_.t)); }

double WaveSolver::probe(double r, double theta) const {
    const AnnularGrid& g = ops_.grid;
    double x = (r - g.r_min) / g.dr();
    x = std::clamp(x, 0.0, static_cast<double>(g.Nr));
    int i = std::min(static_cast<int>(std::floor(x)), g.Nr - 1);
    const double fx = x - i;
    double y = std::fmod(theta, 2.0 * M_PI);
    if (y < 0.0) y += 2.0 * M_PI;
    y /= g.dtheta();
    int j = static_cast<int>(std::floor(y)) % g.Ntheta;
    const double fy = y - std::floor(y);
    const int j1 = (j + 1) % g.Ntheta;
    const auto& u = state_.u;
    return (1 - fx) * (1 - fy) * u[g.index(i, j)] + fx * (1 - fy) * u[g.index(i + 1, j)] +
           (1 - fx) * fy * u[g.index(i, j1)] + fx * fy * u[g.index(i + 1, j1)];
}

// -------------------------------------------------------------- driver

RunResult run_scenario(WaveSolver& solver, const RunOptions& run) {
    if (!(run.t_end > solver.state().t)) fail(ErrorCode::ValidationError, "wave.t_end must exceed the start time");
    RunResult out;
    const double span = run.t_end - solver.state().t;
    double dt = run.dt > 0.0 ? run.dt : solver.default_dt();
    const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    dt = span / static_cast<double>(steps);
    out.dt = dt;
    out.steps = steps;
    out.probe_series.resize(run.probes.size());
    const AnnularGrid& g = solver.grid();

    auto record_rim = [&]() {
        RimSnapshot s;
        s.t = solver.state().t;
        const auto& u = solver.state().u;
        auto ring = [&](int i) {
            return std::vector<double>(u.begin() + static_cast<long>(g.index(i, 0)),
                                       u.begin() + static_cast<long>(g.index(i, 0)) + g.Ntheta);
        };
        s.u_outer = ring(g.Nr);
        s.u_1 = ring(g.Nr - 1);
        s.u_2 = ring(g.Nr - 2);
        out.rim.push_back(std::move(s));
    };
    auto record_probes = [&]() {
        for (std::size_t p = 0; p < run.probes.size(); ++p) {
            out.probe_series[p].emplace_back(solver.state().t, solver.probe(run.probes[p].r, run.probes[p].theta));
        }
    };

    solver.record_energy();
    record_probes();
    if (run.rim_every > 0) record_rim();
    const int every = std::max(run.energy_every, 1);
    for (long s = 1; s <= steps; ++s) {
        solver.step(dt);
        if (s % every == 0 || s == steps) solver.record_energy();
        record_probes();
        if (run.rim_every > 0 && (s % run.rim_every == 0)) record_rim();
    }
    out.energy = solver.state().energy_history;
    out.final_state = solver.state();
    return out;
}

double trapping_metric(const std::vector<EnergySample>& history) {
    if (history.empty() || !(history.front().total > 0.0)) fail(ErrorCode::ZeroEnergy, "initial total energy is zero");
    double worst = 0.0;
    for (const EnergySample& e : history) worst = std::max(worst, e.exterior);
    return worst / history.front().total;
}

double boundary_h1_norm_sq(const RimFunction& g, double radius, int ntheta, double t_end, int nt) {
    if (ntheta < 8 || nt < 2 || !(t_end > 0.0) || !(radius > 0.0)) {
        fail(ErrorCode::InvalidArgument, "invalid H1 norm sampling");
    }
    const double dth = 2.0 * M_PI / ntheta;
    const double dt = t_end / nt;
    std::vector<std::vector<double>> vals(static_cast<std::size_t>(nt + 1), std::vector<double>(ntheta));
    for (int k = 0; k <= nt; ++k) {
        for (int j = 0; j < ntheta; ++j) vals[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = g(k * dt, j * dth);
    }
    std::vector<double> cs(static_cast<std::size_t>(ntheta) * ntheta), sn(cs.size());
    for (int m = 0; m < ntheta; ++m) {
        for (int j = 0; j < ntheta; ++j) {
            const double a = 2.0 * M_PI * static_cast<double>((static_cast<long>(m) * j) % ntheta) / ntheta;
            cs[static_cast<std::size_t>(m) * ntheta + j] = std::cos(a);
            sn[static_cast<std::size_t>(m) * ntheta + j] = std::sin(a);
        }
    }
    double total = 0.0;
    for (int k = 0; k <= nt; ++k) {
        const auto& v = vals[static_cast<std::size_t>(k)];
        // Spectral angular derivative: sum over modes of |m c_m|^2 by Parseval.
        double dtheta_sq = 0.0;
        for (int m = 0; m < ntheta; ++m) {
            int wave = m <= ntheta / 2 ? m : m - ntheta;
            if (2 * m == ntheta) wave = 0;
            if (wave == 0) continue;
            double re = 0.0, im = 0.0;
            for (int j = 0; j < ntheta; ++j) {
                re += v[static_cast<std::size_t>(j)] * cs[static_cast<std::size_t>(m) * ntheta + j];
                im -= v[static_cast<std::size_t>(j)] * sn[static_cast<std::size_t>(m) * ntheta + j];
            }
            dtheta_sq += static_cast<double>(wave) * wave * (re * re + im * im);
        }
        dtheta_sq *= dth / ntheta;  // integral over theta of g_theta^2
        double val_sq = 0.0, rate_sq = 0.0;
        for (int j = 0; j < ntheta; ++j) {
            const double gv = v[static_cast<std::size_t>(j)];
            double gt;
            if (k == 0) gt = (vals[1][static_cast<std::size_t>(j)] - gv) / dt;
            else if (k == nt) gt = (gv - vals[static_cast<std::size_t>(nt - 1)][static_cast<std::size_t>(j)]) / dt;
            else gt = (vals[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(j)] -
                       vals[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]) / (2.0 * dt);
            val_sq += gv * gv * dth;
            rate_sq += gt * gt * dth;
        }
        const double w = (k == 0 || k == nt) ? 0.5 : 1.0;
        total += w * dt * radius * (val_sq + rate_sq + dtheta_sq / (radius * radius));
    }
    return total;
}

// ------------------------------------------------------- manufactured

double ManufacturedSolution::u(double t, double r, double theta) const { return std::cos(omega * t) * phi(r, theta); }

double ManufacturedSolution::pi(const PolarCoefficients& c, double t, double r, double theta) const {
    const double ct = std::cos(omega * t), st = std::sin(omega * t);
    return c.s * (-omega * st * c.a00 * phi(r, theta) + ct * (c.a0r * phi_r(r, theta) + c.a0t * phi_theta(r, theta)));
}

namespace {

// Fourth-order central difference.
template <class F>
double d4(const F& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

SourceSpec manufactured_source(const SpacetimeMetric& metric, const ManufacturedSolution& ms, double r_outer) {
    if (!ms.phi || !ms.phi_r || !ms.phi_theta) fail(ErrorCode::InvalidArgument, "manufactured solution is incomplete");
    SourceSpec src;
    src.kind = SourceSpec::Kind::BoundaryDirichlet;
    src.id = "manufactured";
    const double w = ms.omega;
    src.boundary_value = [ms, r_outer](double t, double th) { return ms.u(t, r_outer, th); };
    src.boundary_rate = [ms, r_outer](double t, double th) {
        return -ms.omega * std::sin(ms.omega * t) * ms.phi(r_outer, th);
    };
    const SpacetimeMetric m = metric;
    auto flux_r_cos = [m, ms](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        return c.s * (c.arr * ms.phi_r(r, th) + c.art * ms.phi_theta(r, th));
    };
    auto flux_t_cos = [m, ms](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        return c.s * (c.art * ms.phi_r(r, th) + c.att * ms.phi_theta(r, th));
    };
    auto flux_r_sin = [m, ms](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        return c.s * c.a0r * ms.phi(r, th);
    };
    auto flux_t_sin = [m, ms](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        return c.s * c.a0t * ms.phi(r, th);
    };
    constexpr double h = 1e-3;
    SeparableTerm cos_term;
    cos_term.time = [w](double t) { return std::cos(w * t); };
    cos_term.space = [=](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        const double dr = d4([&](double x) { return flux_r_cos(x, th); }, r, h);
        const double dt = d4([&](double x) { return flux_t_cos(r, x); }, th, h);
        return -w * w * c.s * c.a00 * ms.phi(r, th) + dr + dt;
    };
    SeparableTerm sin_term;
    sin_term.time = [w](double t) { return std::sin(w * t); };
    sin_term.space = [=](double r, double th) {
        const PolarCoefficients c = polar_coefficients(m, r, th);
        const double dr = d4([&](double x) { return flux_r_sin(x, th); }, r, h);
        const double dt = d4([&](double x) { return flux_t_sin(r, x); }, th, h);
        return -w * c.s * (c.a0r * ms.phi_r(r, th) + c.a0t * ms.phi_theta(r, th)) - w * (dr + dt);
    };
    src.volume_terms = {cos_term, sin_term};
    return src;
}

InnerBoundary manufactured_inner(const SpacetimeMetric& metric, const ManufacturedSolution& ms, double r_inner,
                                 InnerBoundary::Mode mode) {
    InnerBoundary b;
    b.mode = mode;
    if (mode == InnerBoundary::Mode::Outflow) return b;
    const SpacetimeMetric m = metric;
    b.momentum = [m, ms, r_inner](double t, double th) { return ms.pi(polar_coefficients(m, r_inner, th), t, r_inner, th); };
    b.value = [ms, r_inner](double t, double th) { return ms.u(t, r_inner, th); };
    b.rate = [ms, r_inner](double t, double th) { return -ms.omega * std::sin(ms.omega * t) * ms.phi(r_inner, th); };
    return b;
}

double manufactured_error(const WaveSolver& solver, const ManufacturedSolution& ms) {
    const AnnularGrid& g = solver.grid();
    const WaveState& st = solver.state();
    std::vector<double> eu(st.u.size()), ep(st.u.size());
    for (int i = 0; i <= g.Nr; ++i) {
        for (int j = 0; j < g.Ntheta; ++j) {
            const std::size_t k = g.index(i, j);
            eu[k] = st.u[k] - ms.u(st.t, g.r(i), g.theta(j));
            ep[k] = st.pi[k] - ms.pi(solver.operators().node[k], st.t, g.r(i), g.theta(j));
        }
    }
    double sum = 0.0;
    for (int i = 0; i <= g.Nr; ++i) {
        const double r = g.r(i);
        const double wr = (i == 0 || i == g.Nr) ? 0.5 : 1.0;
        for (int j = 0; j < g.Ntheta; ++j) {
            const std::size_t k = g.index(i, j);
            const double s = solver.operators().node[k].s;
            const double er = solver.u_r(eu, i, j);
            const double et = solver.u_theta(eu, i, j);
            sum += wr * (ep[k] * ep[k] / s + s * (er * er + et * et / (r * r)));
        }
    }
    return std::sqrt(sum * g.dr() * g.dtheta());
}

void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& history) {
    os << "t,E_total,E_exterior,E_interior,boundary_flux\n";
    for (const EnergySample& e : history) {
        os << fmt_double(e.t) << ',' << fmt_double(e.total) << ',' << fmt_double(e.exterior) << ','
           << fmt_double(e.interior) << ',' << fmt_double(e.boundary_flux) << '\n';
    }
}

void write_probe_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series) {
    os << "t,u\n";
    for (const auto& [t, u] : series) os << fmt_double(t) << ',' << fmt_double(u) << '\n';
}

std::string snapshot_binary(const WaveState& state) {
    std::string out(state.u.size() * sizeof(double), '\0');
    for (std::size_t k = 0; k < state.u.size(); ++k) {
        std::uint64_t bits;
        std::memcpy(&bits, &state.u[k], sizeof(bits));
        for (int b = 0; b < 8; ++b) out[k * 8 + static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    return out;
}

std::string snapshot_sidecar(const AnnularGrid& grid, double t) {
    nlohmann::ordered_json j;
    j["Nr"] = grid.Nr;
    j["Ntheta"] = grid.Ntheta;
    j["r_min"] = grid.r_min;
    j["r_max"] = grid.r_max;
    j["t"] = t;
    j["layout"] = "float64 little-endian, row-major over (r, theta), (Nr + 1) x Ntheta";
    return j.dump(2) + "\n";
}

}  // namespace horizonlab
