#include "horizonlab/metric_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <utility>

namespace horizonlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EvaluationOutsideDomain: return "EvaluationOutsideDomain";
        case ErrorCode::InvalidProfile: return "InvalidProfile";
        case ErrorCode::SingularMetric: return "SingularMetric";
        case ErrorCode::NotAxisymmetric: return "NotAxisymmetric";
        case ErrorCode::NoRealCharacteristics: return "NoRealCharacteristics";
        case ErrorCode::NotOnErgosphere: return "NotOnErgosphere";
        case ErrorCode::DegenerateRank: return "DegenerateRank";
        case ErrorCode::MalformedCurve: return "MalformedCurve";
        case ErrorCode::MixedSign: return "MixedSign";
        case ErrorCode::NotCharacteristic: return "NotCharacteristic";
        case ErrorCode::ZeroRoot: return "ZeroRoot";
        case ErrorCode::NotInErgoregion: return "NotInErgoregion";
        case ErrorCode::ConstraintDrift: return "ConstraintDrift";
        case ErrorCode::FrameDiscontinuity: return "FrameDiscontinuity";
        case ErrorCode::ZeroTimeRate: return "ZeroTimeRate";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::NoReturn: return "NoReturn";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::CFLViolation: return "CFLViolation";
        case ErrorCode::NonFiniteField: return "NonFiniteField";
        case ErrorCode::ZeroEnergy: return "ZeroEnergy";
        case ErrorCode::NormalizationDomainError: return "NormalizationDomainError";
        case ErrorCode::NotABlackHole: return "NotABlackHole";
        case ErrorCode::PerturbationLeak: return "PerturbationLeak";
        case ErrorCode::InvalidPerturbation: return "InvalidPerturbation";
        case ErrorCode::BoundaryPotentialNonzero: return "BoundaryPotentialNonzero";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Point point2(double x1, double x2) {
    Point p(2);
    p << x1, x2;
    return p;
}

Point point3(double x1, double x2, double x3) {
    Point p(3);
    p << x1, x2, x3;
    return p;
}

// ---------------------------------------------------------------- Domain

Domain Domain::annulus(double r_min, double r_max) {
    if (!(r_min >= 0.0) || !(r_max > r_min)) {
        fail(ErrorCode::InvalidArgument, "annulus requires 0 <= r_min < r_max");
    }
    Domain d;
    d.kind = Kind::Annulus;
    d.r_min = r_min;
    d.r_max = r_max;
    return d;
}

Domain Domain::box(Point lo, Point hi) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        fail(ErrorCode::InvalidArgument, "box bounds must have equal nonzero length");
    }
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!(hi[i] > lo[i])) fail(ErrorCode::InvalidArgument, "box requires lo < hi");
    }
    Domain d;
    d.kind = Kind::Box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    return d;
}

bool Domain::contains(const Point& x) const {
    if (!x.allFinite()) return false;
    switch (kind) {
        case Kind::Everywhere:
            return true;
        case Kind::Annulus: {
            const double r = x.norm();
            const bool above = r_min > 0.0 ? r >= r_min : r > 0.0;
            return above && r <= r_max;
        }
        case Kind::Box:
            if (x.size() != lo.size()) return false;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (x[i] < lo[i] || x[i] > hi[i]) return false;
            }
            return true;
    }
    return false;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Everywhere: os << "everywhere"; break;
        case Kind::Annulus: os << "annulus " << r_min << " <= |x| <= " << r_max; break;
        case Kind::Box: os << "box"; break;
    }
    return os.str();
}

// ------------------------------------------------------- SpacetimeMetric

SpacetimeMetric::SpacetimeMetric(int n_space, Evaluator eval, Domain domain, Derivative deriv,
                                 std::string family)
    : n_space_(n_space),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      domain_(std::move(domain)),
      family_(std::move(family)) {
    if (n_space_ != 2 && n_space_ != 3) fail(ErrorCode::InvalidArgument, "n_space must be 2 or 3");
    if (!eval_) fail(ErrorCode::InvalidArgument, "metric evaluator is empty");
}

static std::string point_text(const Point& x) {
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

MetricMatrix SpacetimeMetric::operator()(const Point& x) const {
    if (x.size() != n_space_) {
        fail(ErrorCode::InvalidArgument, "point dimension does not match metric");
    }
    if (!domain_.contains(x)) {
        fail(ErrorCode::EvaluationOutsideDomain,
             "point " + point_text(x) + " outside " + domain_.describe());
    }
    return eval_(x);
}

SpatialMatrix SpacetimeMetric::spatial_block(const Point& x) const {
    const MetricMatrix g = (*this)(x);
    return g.bottomRightCorner(n_space_, n_space_);
}

MetricMatrix SpacetimeMetric::fd_derivative(const Point& x, int p, double h) const {
    Point xp = x;
    Point xm = x;
    xp[p] += h;
    xm[p] -= h;
    return (eval_(xp) - eval_(xm)) / (2.0 * h);
}

MetricMatrix SpacetimeMetric::derivative(const Point& x, int p) const {
    if (p < 0 || p >= n_space_) fail(ErrorCode::InvalidArgument, "derivative index out of range");
    if (!domain_.contains(x)) {
        fail(ErrorCode::EvaluationOutsideDomain,
             "point " + point_text(x) + " outside " + domain_.describe());
    }
    if (deriv_) return deriv_(x, p);
    return fd_derivative(x, p, fd_step(x));
}

SpacetimeMetric SpacetimeMetric::scaled(double alpha) const {
    if (!(alpha > 0.0)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
    Evaluator e = [inner = eval_, alpha](const Point& x) -> MetricMatrix { return alpha * inner(x); };
    Derivative d;
    if (deriv_) {
        d = [inner = deriv_, alpha](const Point& x, int p) -> MetricMatrix { return alpha * inner(x, p); };
    }
    SpacetimeMetric out(n_space_, e, domain_, d, family_);
    out.fd_relative_step_ = fd_relative_step_;
    return out;
}

namespace {
MetricMatrix flip_time_row(MetricMatrix g) {
    const Eigen::Index n = g.rows();
    for (Eigen::Index j = 1; j < n; ++j) {
        g(0, j) = -g(0, j);
        g(j, 0) = -g(j, 0);
    }
    return g;
}
}  // namespace

SpacetimeMetric SpacetimeMetric::time_reversed() const {
    Evaluator e = [inner = eval_](const Point& x) { return flip_time_row(inner(x)); };
    Derivative d;
    if (deriv_) d = [inner = deriv_](const Point& x, int p) { return flip_time_row(inner(x, p)); };
    SpacetimeMetric out(n_space_, e, domain_, d, family_);
    out.fd_relative_step_ = fd_relative_step_;
    return out;
}

SpacetimeMetric SpacetimeMetric::with_domain(Domain domain) const {
    SpacetimeMetric out = *this;
    out.domain_ = std::move(domain);
    return out;
}

// ------------------------------------------------------------- FlowSpec

FlowSpec& FlowSpec::with_constant_index(double n) {
    if (!(n >= 1.0)) fail(ErrorCode::InvalidArgument, "refraction index must be >= 1");
    index = [n](const Point&) { return n; };
    index_gradient = [dim = n_space](const Point&) { return Point(Point::Zero(dim)); };
    return *this;
}

FlowSpec& FlowSpec::with_constant_density(double rho0) {
    if (!(rho0 > 0.0)) fail(ErrorCode::InvalidArgument, "density must be positive");
    rho = [rho0](const Point&) { return rho0; };
    rho_gradient = [dim = n_space](const Point&) { return Point(Point::Zero(dim)); };
    return *this;
}

namespace {

void check_flow(const FlowSpec& flow) {
    if (flow.n_space != 2 && flow.n_space != 3) fail(ErrorCode::InvalidArgument, "flow dimension must be 2 or 3");
    if (!flow.velocity) fail(ErrorCode::InvalidArgument, "flow velocity is empty");
    if (!(flow.c > 0.0)) fail(ErrorCode::InvalidArgument, "wave speed c must be positive");
    if (!flow.index || !flow.rho) fail(ErrorCode::InvalidArgument, "flow index and density must be set");
}

MetricMatrix minkowski(int n) {
    MetricMatrix g = MetricMatrix::Zero(n + 1, n + 1);
    g(0, 0) = 1.0;
    for (int j = 1; j <= n; ++j) g(j, j) = -1.0;
    return g;
}

double checked_index(const FlowSpec& flow, const Point& x) {
    const double n = flow.index(x);
    if (!(n >= 1.0)) fail(ErrorCode::InvalidArgument, "refraction index below 1 at " + point_text(x));
    return n;
}

double checked_rho(const FlowSpec& flow, const Point& x) {
    const double rho = flow.rho(x);
    if (!(rho > 0.0)) fail(ErrorCode::InvalidArgument, "density not positive at " + point_text(x));
    return rho;
}

}  // namespace

SpacetimeMetric gordon_metric(const FlowSpec& flow) {
    check_flow(flow);
    const int n = flow.n_space;
    auto four_velocity = [flow](const Point& x, double& gamma) {
        const Point w = flow.velocity(x);
        const double beta2 = w.squaredNorm() / (flow.c * flow.c);
        if (!(beta2 < 1.0)) {
            fail(ErrorCode::EvaluationOutsideDomain, "|w| >= c at " + point_text(x));
        }
        gamma = 1.0 / std::sqrt(1.0 - beta2);
        Eigen::VectorXd v(w.size() + 1);
        v[0] = gamma;
        v.tail(w.size()) = gamma * w / flow.c;
        return v;
    };
    SpacetimeMetric::Evaluator eval = [flow, n, four_velocity](const Point& x) -> MetricMatrix {
        double gamma = 0.0;
        const Eigen::VectorXd v = four_velocity(x, gamma);
        const double nn = checked_index(flow, x);
        return minkowski(n) + (nn * nn - 1.0) * v * v.transpose();
    };
    SpacetimeMetric::Derivative deriv;
    if (flow.velocity_jacobian && flow.index_gradient) {
        deriv = [flow, four_velocity](const Point& x, int p) -> MetricMatrix {
            double gamma = 0.0;
            const Eigen::VectorXd v = four_velocity(x, gamma);
            const Point w = flow.velocity(x);
            const SpatialMatrix J = flow.velocity_jacobian(x);
            const double nn = checked_index(flow, x);
            const double dn = flow.index_gradient(x)[p];
            const double c2 = flow.c * flow.c;
            const double dgamma = gamma * gamma * gamma * w.dot(J.col(p)) / c2;
            Eigen::VectorXd dv(v.size());
            dv[0] = dgamma;
            dv.tail(w.size()) = (dgamma * w + gamma * J.col(p)) / flow.c;
            return 2.0 * nn * dn * v * v.transpose() +
                   (nn * nn - 1.0) * (dv * v.transpose() + v * dv.transpose());
        };
    }
    return SpacetimeMetric(n, eval, flow.domain, deriv, "gordon");
}

SpacetimeMetric slow_medium_metric(const FlowSpec& flow) {
    check_flow(flow);
    const int n = flow.n_space;
    SpacetimeMetric::Evaluator eval = [flow, n](const Point& x) -> MetricMatrix {
        const double nn = checked_index(flow, x);
        const Point w = flow.velocity(x);
        MetricMatrix g = minkowski(n);
        g(0, 0) = nn * nn;
        for (int j = 0; j < n; ++j) {
            g(0, j + 1) = g(j + 1, 0) = (nn * nn - 1.0) * w[j] / flow.c;
        }
        return g;
    };
    SpacetimeMetric::Derivative deriv;
    if (flow.velocity_jacobian && flow.index_gradient) {
        deriv = [flow, n](const Point& x, int p) -> MetricMatrix {
            const double nn = checked_index(flow, x);
            const double dn = flow.index_gradient(x)[p];
            const Point w = flow.velocity(x);
            const SpatialMatrix J = flow.velocity_jacobian(x);
            MetricMatrix d = MetricMatrix::Zero(n + 1, n + 1);
            d(0, 0) = 2.0 * nn * dn;
            for (int j = 0; j < n; ++j) {
                d(0, j + 1) = d(j + 1, 0) = (2.0 * nn * dn * w[j] + (nn * nn - 1.0) * J(j, p)) / flow.c;
            }
            return d;
        };
    }
    return SpacetimeMetric(n, eval, flow.domain, deriv, "slow_medium");
}

SpacetimeMetric acoustic_metric(const FlowSpec& flow) {
    check_flow(flow);
    const int n = flow.n_space;
    auto core = [n, c = flow.c](const Point& v) {
        MetricMatrix m(n + 1, n + 1);
        m(0, 0) = 1.0;
        for (int j = 0; j < n; ++j) {
            m(0, j + 1) = m(j + 1, 0) = v[j];
            for (int k = 0; k < n; ++k) m(j + 1, k + 1) = (j == k ? -c * c : 0.0) + v[j] * v[k];
        }
        return m;
    };
    SpacetimeMetric::Evaluator eval = [flow, core](const Point& x) -> MetricMatrix {
        const double rho = checked_rho(flow, x);
        return core(flow.velocity(x)) / (rho * flow.c);
    };
    SpacetimeMetric::Derivative deriv;
    if (flow.velocity_jacobian && flow.rho_gradient) {
        deriv = [flow, core, n](const Point& x, int p) -> MetricMatrix {
            const double rho = checked_rho(flow, x);
            const double drho = flow.rho_gradient(x)[p];
            const Point v = flow.velocity(x);
            const SpatialMatrix J = flow.velocity_jacobian(x);
            MetricMatrix dm = MetricMatrix::Zero(n + 1, n + 1);
            for (int j = 0; j < n; ++j) {
                dm(0, j + 1) = dm(j + 1, 0) = J(j, p);
                for (int k = 0; k < n; ++k) dm(j + 1, k + 1) = J(j, p) * v[k] + v[j] * J(k, p);
            }
            const double scale = 1.0 / (rho * flow.c);
            return scale * dm - (drho / rho) * scale * core(v);
        };
    }
    return SpacetimeMetric(n, eval, flow.domain, deriv, "acoustic");
}

FlowSpec vortex_flow(double A, double B, Domain domain) {
    if (A == 0.0 && B == 0.0) fail(ErrorCode::InvalidArgument, "vortex requires (A, B) != (0, 0)");
    FlowSpec flow;
    flow.n_space = 2;
    flow.name = "vortex";
    flow.domain = std::move(domain);
    flow.velocity = [A, B](const Point& x) -> Point {
        const double r2 = x.squaredNorm();
        if (!(r2 > 0.0)) fail(ErrorCode::EvaluationOutsideDomain, "vortex flow is singular at r = 0");
        return point2((A * x[0] - B * x[1]) / r2, (B * x[0] + A * x[1]) / r2);
    };
    flow.velocity_jacobian = [A, B](const Point& x) -> SpatialMatrix {
        const double r2 = x.squaredNorm();
        if (!(r2 > 0.0)) fail(ErrorCode::EvaluationOutsideDomain, "vortex flow is singular at r = 0");
        Eigen::Matrix2d M;
        M << A, -B, B, A;
        const Eigen::Vector2d xv(x[0], x[1]);
        const Eigen::Vector2d Mx = M * xv;
        SpatialMatrix J = M / r2 - 2.0 * Mx * xv.transpose() / (r2 * r2);
        return J;
    };
    flow.with_constant_index(1.0);
    flow.with_constant_density(1.0);
    return flow;
}

FlowSpec radial_profile_flow(const RadialProfile& profile, double r1, double r0, double outer_radius,
                             int samples) {
    if (!profile.A || !profile.B) fail(ErrorCode::InvalidProfile, "profile functions A and B must be set");
    if (!(r1 > 0.0) || !(r0 > r1)) fail(ErrorCode::InvalidProfile, "profile requires 0 < r1 < r0");
    if (!(outer_radius >= r0)) fail(ErrorCode::InvalidProfile, "outer radius must be >= r0");
    if (samples < 2) fail(ErrorCode::InvalidProfile, "at least two validation samples required");

    auto where = [](double r) {
        std::ostringstream os;
        os.precision(17);
        os << " at r = " << r;
        return os.str();
    };
    for (int i = 0; i < samples; ++i) {
        const double r = r1 + (r0 - r1) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double a = profile.A(r);
        const double b = profile.B(r);
        if (!(b > 0.0)) fail(ErrorCode::InvalidProfile, "B(r) must be positive" + where(r));
        if (i < samples - 1 && !(a * a + b * b > 1.0)) {
            fail(ErrorCode::InvalidProfile, "A^2 + B^2 must exceed 1 below r0" + where(r));
        }
    }
    const double a0 = profile.A(r0);
    const double b0 = profile.B(r0);
    if (std::abs(a0 * a0 + b0 * b0 - 1.0) > 1e-10) {
        fail(ErrorCode::InvalidProfile, "A^2 + B^2 must equal 1 at r0" + where(r0));
    }

    FlowSpec flow;
    flow.n_space = 2;
    flow.name = "radial_profile";
    flow.domain = Domain::annulus(r1, outer_radius);
    flow.velocity = [profile](const Point& x) -> Point {
        const double r = x.norm();
        if (!(r > 0.0)) fail(ErrorCode::EvaluationOutsideDomain, "radial profile singular at r = 0");
        const double a = profile.A(r) / r;
        const double b = profile.B(r) / r;
        return point2(a * x[0] - b * x[1], a * x[1] + b * x[0]);
    };
    if (profile.dA && profile.dB) {
        flow.velocity_jacobian = [profile](const Point& x) -> SpatialMatrix {
            const double r = x.norm();
            const double a = profile.A(r) / r;
            const double b = profile.B(r) / r;
            const double da = (profile.dA(r) * r - profile.A(r)) / (r * r);
            const double db = (profile.dB(r) * r - profile.B(r)) / (r * r);
            const Eigen::Vector2d xv(x[0], x[1]);
            const Eigen::Vector2d jx(-x[1], x[0]);
            Eigen::Matrix2d rot;
            rot << 0.0, -1.0, 1.0, 0.0;
            SpatialMatrix J = a * Eigen::Matrix2d::Identity() + b * rot +
                              (da * xv + db * jx) * xv.transpose() / r;
            return J;
        };
    }
    flow.with_constant_index(1.0);
    flow.with_constant_density(1.0);
    return flow;
}

RadialProfile example2_profile() {
    // Cubic through (1.2, 1), (1.8, -1), (2.5, -1), (3, 0) in Newton form.
    static constexpr double xs[4] = {1.2, 1.8, 2.5, 3.0};
    static constexpr double ys[4] = {1.0, -1.0, -1.0, 0.0};
    double coef[4];
    for (int i = 0; i < 4; ++i) coef[i] = ys[i];
    for (int level = 1; level < 4; ++level) {
        for (int i = 3; i >= level; --i) coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level]);
    }
    const double c0 = coef[0], c1 = coef[1], c2 = coef[2], c3 = coef[3];
    RadialProfile p;
    p.A = [=](double r) {
        return c0 + (r - xs[0]) * (c1 + (r - xs[1]) * (c2 + (r - xs[2]) * c3));
    };
    p.dA = [=](double r) {
        const double u0 = r - xs[0], u1 = r - xs[1], u2 = r - xs[2];
        return c1 + c2 * (u0 + u1) + c3 * (u1 * u2 + u0 * u2 + u0 * u1);
    };
    constexpr double r0 = 3.0;
    p.B = [](double r) { return std::exp(r0 - r); };
    p.dB = [](double r) { return -std::exp(r0 - r); };
    return p;
}

// ----------------------------------------------------------- diagnostics

double spatial_det(const SpacetimeMetric& metric, const Point& x) {
    return metric.spatial_block(x).determinant();
}

std::string lorentz_violation(const MetricMatrix& g, int n_space) {
    if (g.rows() != n_space + 1 || g.cols() != n_space + 1) return "shape";
    const double scale = g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale)) return "symmetry";
    if (!(g(0, 0) > 0.0)) return "g00";
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const Eigen::VectorXd ev = es.eigenvalues();
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > 0.0) ++pos;
        if (ev[i] < 0.0) ++neg;
    }
    if (pos != 1 || neg != n_space) return "signature";
    const double det = g.determinant();
    const double sign = (n_space % 2 == 0) ? 1.0 : -1.0;
    if (!(sign / det > 0.0)) return "determinant";
    return {};
}

MetricMatrix lower_metric(const SpacetimeMetric& metric, const Point& x) {
    const MetricMatrix g = metric(x);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    const double scale = g.cwiseAbs().maxCoeff();
    lu.setThreshold(1e-14);
    if (!lu.isInvertible() || std::abs(lu.determinant()) <= 1e-300 ||
        std::abs(lu.determinant()) < 1e-14 * std::pow(scale, static_cast<double>(g.rows()))) {
        fail(ErrorCode::SingularMetric, "metric not invertible at " + point_text(x));
    }
    MetricMatrix inv = lu.inverse();
    return 0.5 * (inv + inv.transpose());
}

HyperbolicityReport validate_hyperbolicity(const SpacetimeMetric& metric, const Point& x) {
    const MetricMatrix g = metric(x);
    const int n = metric.n_space();
    HyperbolicityReport rep;
    rep.full_det = g.determinant();
    const MetricMatrix lower = lower_metric(metric, x);
    const SpatialMatrix G = g.bottomRightCorner(n, n);
    rep.spatial_det = G.determinant();
    rep.g00_positive = g(0, 0) > 0.0;
    const Eigen::MatrixXd Gd = G;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gd);
    rep.spatial_negative_definite = es.eigenvalues().maxCoeff() < 0.0;
    rep.lower_g00_positive = lower(0, 0) > 0.0;
    rep.conditions_agree = rep.spatial_negative_definite == rep.lower_g00_positive;
    return rep;
}

// ------------------------------------------------- axisymmetric reduction

namespace {

struct SphericalFrame {
    Eigen::Vector3d e_r, e_theta, e_phi, x;
};

SphericalFrame spherical_frame(double r, double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    SphericalFrame f;
    f.e_r = {st * cp, st * sp, ct};
    f.e_theta = {ct * cp, ct * sp, -st};
    f.e_phi = {-sp, cp, 0.0};
    f.x = r * f.e_r;
    return f;
}

// Components of g^{jk} in the unit spherical frame, time first.
Eigen::Matrix4d frame_components(const SpacetimeMetric& metric, double r, double theta, double phi) {
    const SphericalFrame f = spherical_frame(r, theta, phi);
    const MetricMatrix g = metric(point3(f.x[0], f.x[1], f.x[2]));
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    T(0, 0) = 1.0;
    T.block<3, 1>(1, 1) = f.e_r;
    T.block<3, 1>(1, 2) = f.e_theta;
    T.block<3, 1>(1, 3) = f.e_phi;
    return T.transpose() * Eigen::Matrix4d(g) * T;
}

}  // namespace

SpacetimeMetric axisym_reduce(const SpacetimeMetric& metric, const AxisymmetricOptions& options) {
    if (metric.n_space() != 3) fail(ErrorCode::InvalidArgument, "axisymmetric reduction needs a 3D metric");
    double worst = 0.0;
    for (int i = 0; i < options.radial_samples; ++i) {
        const double r = options.r_lo + (options.r_hi - options.r_lo) * i / std::max(1, options.radial_samples - 1);
        for (int j = 0; j < options.polar_samples; ++j) {
            const double th = options.theta_lo +
                              (options.theta_hi - options.theta_lo) * j / std::max(1, options.polar_samples - 1);
            const Eigen::Matrix4d ref = frame_components(metric, r, th, 0.0);
            const double scale = 1.0 + ref.cwiseAbs().maxCoeff();
            for (int k = 1; k < options.azimuth_samples; ++k) {
                const double phi = 2.0 * M_PI * k / options.azimuth_samples;
                const double dev = (frame_components(metric, r, th, phi) - ref).cwiseAbs().maxCoeff() / scale;
                worst = std::max(worst, dev);
            }
        }
    }
    if (worst > options.tolerance) {
        std::ostringstream os;
        os << "azimuthal variation " << worst << " exceeds " << options.tolerance;
        fail(ErrorCode::NotAxisymmetric, os.str());
    }

    SpacetimeMetric::Evaluator eval = [metric](const Point& q) -> MetricMatrix {
        const double r = q[0], th = q[1];
        const Eigen::Matrix4d c = frame_components(metric, r, th, 0.0);
        MetricMatrix a(3, 3);
        a(0, 0) = c(0, 0);
        a(0, 1) = a(1, 0) = c(0, 1);
        a(0, 2) = a(2, 0) = c(0, 2) / r;
        a(1, 1) = c(1, 1);
        a(1, 2) = a(2, 1) = c(1, 2) / r;
        a(2, 2) = c(2, 2) / (r * r);
        return a;
    };
    Point lo = point2(1e-12, 1e-12);
    Point hi = point2(std::numeric_limits<double>::infinity(), M_PI - 1e-12);
    return SpacetimeMetric(2, eval, Domain::box(lo, hi), {}, metric.family() + "_axisym");
}

}  // namespace horizonlab
