#include "ventcel/curve.hpp"

#include "ventcel/error.hpp"
#include "ventcel/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ventcel {

namespace {

constexpr double kMinSpeed = 1e-12;

struct SimpsonState {
    int evaluations = 0;
    double error_estimate = 0.0;
    bool converged = true;
};

template <class F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double eps, int depth, SimpsonState& state)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    state.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15 * eps || depth <= 0) {
        if (depth <= 0 && std::abs(delta) > 15 * eps) {
            state.converged = false;
        }
        state.error_estimate += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, state)
         + simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, state);
}

/// Adaptive Simpson of |r'| over [a, b] with absolute tolerance eps.
double adaptive_speed_integral(const Curve& curve, double a, double b, double eps)
{
    if (a == b) return 0.0;
    auto f = [&curve](double t) { return curve.speed(t); };
    // Split into a few panels first so that symmetric integrands do not fool
    // the first error estimate.
    constexpr int panels = 8;
    SimpsonState state;
    double total = 0.0;
    const double width = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == panels) ? b : lo + width;
        const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4 * fmid + fhi);
        total += simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, eps / panels, 40, state);
    }
    if (!state.converged) {
        throw NumericalError("arc-length quadrature did not converge", state.error_estimate);
    }
    return total;
}

/// Gauss-Legendre on a short interval; machine precision for smooth |r'|.
double local_speed_integral(const Curve& curve, double a, double b)
{
    const auto& rule = quad::gauss_legendre(10);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        sum += rule.weights[q] * curve.speed(a + rule.points[q] * (b - a));
    }
    return sum * (b - a);
}

void require_in_range(const Curve& curve, double t)
{
    if (!(t >= curve.t_begin() && t <= curve.t_end())) {
        std::ostringstream os;
        os << "parameter " << t << " outside [" << curve.t_begin() << ", " << curve.t_end()
           << "] of curve '" << curve.name() << "'";
        throw DomainError(os.str());
    }
}

double pow_real(double base, double exponent) { return std::pow(base, exponent); }

}  // namespace

Curve::Curve(std::string name, double t0, double t1, Map position, Map first_deriv,
             Map second_deriv, bool closed)
    : name_(std::move(name)),
      t0_(t0),
      t1_(t1),
      pos_(std::move(position)),
      d1_(std::move(first_deriv)),
      d2_(std::move(second_deriv)),
      closed_(closed)
{
    if (!(t0_ < t1_)) throw DomainError("curve parameter range must satisfy t0 < t1");
    if (!pos_ || !d1_) throw DomainError("curve needs a position map and a first derivative");
}

Curve Curve::with_orientation(int orientation) const
{
    Curve c = *this;
    c.orientation_ = orientation >= 0 ? 1 : -1;
    return c;
}

Vec2 Curve::second_derivative(double t) const
{
    if (!d2_) {
        throw DegenerateParametrization("curve '" + name_ + "' has no second derivative (C1 only)");
    }
    return d2_(t);
}

Vec2 eval_curve(const Curve& curve, double t)
{
    require_in_range(curve, t);
    return curve.position(t);
}

double arc_length_between(const Curve& curve, double a, double b)
{
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    // Relative tolerance: scale by a cheap estimate of the length.
    const double rough = local_speed_integral(curve, lo, hi);
    const double eps = 1e-10 * std::max(std::abs(rough), 1e-300);
    return sign * adaptive_speed_integral(curve, lo, hi, eps);
}

double arc_length(const Curve& curve, double t)
{
    require_in_range(curve, t);
    return arc_length_between(curve, curve.t_begin(), t);
}

ArcLengthTable::ArcLengthTable(Curve curve, int samples) : curve_(std::move(curve))
{
    if (samples < 2) throw DomainError("arc-length table needs at least two samples");
    t_.resize(samples + 1);
    s_.resize(samples + 1);
    const double t0 = curve_.t_begin(), t1 = curve_.t_end();
    for (int i = 0; i <= samples; ++i) {
        t_[i] = (i == samples) ? t1 : t0 + (t1 - t0) * i / samples;
    }
    s_[0] = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double rough = local_speed_integral(curve_, t_[i], t_[i + 1]);
        const double piece = adaptive_speed_integral(curve_, t_[i], t_[i + 1], 1e-14 * rough);
        s_[i + 1] = s_[i] + piece;
    }
    for (int i = 0; i < samples; ++i) {
        if (!(s_[i + 1] > s_[i])) {
            throw DegenerateParametrization("arc length is not strictly increasing on curve '"
                                            + curve_.name() + "'");
        }
    }
}

double ArcLengthTable::length_at(double t) const
{
    require_in_range(curve_, t);
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t k = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (k + 1 >= t_.size()) k = t_.size() - 2;
    return s_[k] + local_speed_integral(curve_, t_[k], t);
}

double ArcLengthTable::parameter_at(double s) const
{
    const double L = total_length();
    if (!(s >= 0.0 && s <= L)) {
        std::ostringstream os;
        os << "arc length " << s << " outside [0, " << L << "]";
        throw DomainError(os.str());
    }
    if (s == 0.0) return t_.front();
    if (s == L) return t_.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
    if (k + 1 >= s_.size()) k = s_.size() - 2;
    const double ta = t_[k], tb = t_[k + 1];
    double t = ta + (tb - ta) * (s - s_[k]) / (s_[k + 1] - s_[k]);
    for (int it_newton = 0; it_newton < 30; ++it_newton) {
        const double residual = s_[k] + local_speed_integral(curve_, ta, t) - s;
        const double step = residual / curve_.speed(t);
        t = std::clamp(t - step, ta, tb);
        if (std::abs(residual) < 1e-15 * L) break;
    }
    return t;
}

double inverse_arc_length(const ArcLengthTable& table, double s) { return table.parameter_at(s); }

double curvature(const Curve& curve, double t)
{
    const Vec2 d1 = curve.first_derivative(t);
    const double sp = d1.norm();
    if (sp < kMinSpeed) {
        throw DegenerateParametrization("|r'(t)| below 1e-12 on curve '" + curve.name() + "'");
    }
    const Vec2 d2 = curve.second_derivative(t);
    return (d1.x() * d2.y() - d1.y() * d2.x()) / (sp * sp * sp);
}

TangentNormal tangent_normal(const Curve& curve, double t)
{
    const Vec2 d1 = curve.first_derivative(t);
    const double sp = d1.norm();
    if (sp < kMinSpeed) {
        throw DegenerateParametrization("|r'(t)| below 1e-12 on curve '" + curve.name() + "'");
    }
    const Vec2 tau = d1 / sp;
    const Vec2 left(-tau.y(), tau.x());
    return {tau, curve.orientation() * left};
}

double advance_by_arc_length(const Curve& curve, double t, double ds)
{
    if (ds == 0.0) return t;
    double target = t + ds / curve.speed(t);
    for (int it = 0; it < 50; ++it) {
        const double residual = local_speed_integral(curve, t, target) - ds;
        target -= residual / curve.speed(target);
        if (std::abs(residual) <= 4e-16 * std::abs(ds)) break;
    }
    return target;
}

double approximate_length(const Curve& curve)
{
    constexpr int panels = 16;
    const double w = (curve.t_end() - curve.t_begin()) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        sum += local_speed_integral(curve, curve.t_begin() + i * w, curve.t_begin() + (i + 1) * w);
    }
    return sum;
}

double arc_length_fd_step(const Curve& curve)
{
    const double L = arc_length_between(curve, curve.t_begin(), curve.t_end());
    return std::max(1e-3 * L, 1e-7);
}

BoundaryFieldSample boundary_field_sample(const PlaneField& field, const Curve& curve, double t)
{
    const Vec2 d1 = curve.first_derivative(t);
    const double sp = d1.norm();
    if (sp < kMinSpeed) {
        throw DegenerateParametrization("|r'(t)| below 1e-12 on curve '" + curve.name() + "'");
    }
    const Vec2 p = curve.position(t);
    const Vec2 tau = d1 / sp;
    const Vec2 left(-tau.y(), tau.x());
    const Vec2 g = field.grad(p);
    const Mat2 H = field.hess(p);

    BoundaryFieldSample out;
    out.u_tau = tau.dot(g);
    out.u_tautau = tau.dot(H * tau);
    const double u_nu_left = left.dot(g);
    out.u_nu = curve.orientation() * u_nu_left;

    // Fourth-order central stencils in arc length.
    const double h = arc_length_fd_step(curve);
    double f[5];
    for (int k = -2; k <= 2; ++k) {
        const double tk = advance_by_arc_length(curve, t, k * h);
        f[k + 2] = field(curve.position(tk));
    }
    out.u_s = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
    out.u_ss = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);

    if (curve.has_second_derivative()) {
        out.kappa = curvature(curve, t);
        out.u_ss_identity = out.u_tautau + out.kappa * u_nu_left;
    } else {
        out.kappa = std::numeric_limits<double>::quiet_NaN();
        out.u_ss_identity = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double equivalence_residual(const PlaneField& field, const Curve& curve, double t)
{
    const BoundaryFieldSample s = boundary_field_sample(field, curve, t);
    if (std::isnan(s.u_ss_identity)) {
        throw DegenerateParametrization("equivalence residual needs a C2 curve");
    }
    return std::abs(s.u_ss - s.u_ss_identity);
}

std::vector<std::string> check_curve(const Curve& curve, int samples)
{
    samples = std::max(samples, 1000);
    std::vector<std::string> issues;
    const double t0 = curve.t_begin(), t1 = curve.t_end();
    std::vector<double> ts(samples + 1);
    std::vector<Vec2> pts(samples + 1);
    double min_speed = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        ts[i] = (i == samples) ? t1 : t0 + (t1 - t0) * i / samples;
        pts[i] = curve.position(ts[i]);
        min_speed = std::min(min_speed, curve.speed(ts[i]));
    }
    if (!(min_speed > kMinSpeed)) {
        std::ostringstream os;
        os << "irregular parametrization: min |r'| = " << min_speed;
        issues.push_back(os.str());
    }
    if (curve.closed()) {
        const double gap = (curve.position(t0) - curve.position(t1)).norm();
        if (!(gap < 1e-12)) issues.push_back("closed curve endpoints differ by " + std::to_string(gap));
        const Vec2 ta = curve.first_derivative(t0).normalized();
        const Vec2 tb = curve.first_derivative(t1).normalized();
        if (!((ta - tb).norm() < 1e-10)) issues.push_back("closed curve tangents do not match");
    }
    const double min_sep = (t1 - t0) / 100.0;
    for (int i = 0; i <= samples; ++i) {
        for (int j = i + 1; j <= samples; ++j) {
            if (ts[j] - ts[i] <= min_sep) continue;
            if (curve.closed() && i == 0 && j == samples) continue;
            if ((pts[i] - pts[j]).norm() < 1e-10) {
                std::ostringstream os;
                os << "curve not simple: t=" << ts[i] << " and t=" << ts[j] << " coincide";
                issues.push_back(os.str());
                return issues;
            }
        }
    }
    return issues;
}

Curve appendix_curve()
{
    // y(t) = (2 - rho)^(-2/3) (1 + rho)^(-1/3), x(t) = t y(t).
    auto y = [](double t) {
        const double rho = std::sqrt(1 + t * t);
        return pow_real(2 - rho, -2.0 / 3.0) * pow_real(1 + rho, -1.0 / 3.0);
    };
    auto dy = [](double t) {
        const double rho = std::sqrt(1 + t * t);
        return t * pow_real(2 - rho, -5.0 / 3.0) * pow_real(1 + rho, -4.0 / 3.0);
    };
    auto ddy = [](double t) {
        const double rho = std::sqrt(1 + t * t);
        return pow_real(2 - rho, -8.0 / 3.0) * pow_real(1 + rho, -7.0 / 3.0)
             * (1 - rho + 2 * rho * rho * rho) / rho;
    };
    auto pos = [y](double t) { return Vec2(t * y(t), y(t)); };
    auto d1 = [y, dy](double t) { return Vec2(y(t) + t * dy(t), dy(t)); };
    auto d2 = [dy, ddy](double t) { return Vec2(2 * dy(t) + t * ddy(t), ddy(t)); };
    return Curve("appendix", -1.0, 1.0, pos, d1, d2, false);
}

Curve circle_curve(double radius, const Vec2& center)
{
    if (!(radius > 0)) throw DomainError("circle radius must be positive");
    auto pos = [radius, center](double t) {
        return Vec2(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
    };
    auto d1 = [radius](double t) { return Vec2(-radius * std::sin(t), radius * std::cos(t)); };
    auto d2 = [radius](double t) { return Vec2(-radius * std::cos(t), -radius * std::sin(t)); };
    std::ostringstream name;
    name.precision(17);
    name << "circle R=" << radius;
    if (center != Vec2::Zero()) name << " cx=" << center.x() << " cy=" << center.y();
    return Curve(name.str(), 0.0, 2 * std::numbers::pi, pos, d1, d2, true);
}

Curve segment_curve(const Vec2& a, const Vec2& b)
{
    if ((b - a).norm() < kMinSpeed) throw DegenerateParametrization("degenerate segment");
    auto pos = [a, b](double t) { return Vec2(a + t * (b - a)); };
    auto d1 = [a, b](double) { return Vec2(b - a); };
    auto d2 = [](double) { return Vec2(0.0, 0.0); };
    std::ostringstream name;
    name.precision(17);
    name << "segment " << a.x() << ' ' << a.y() << ' ' << b.x() << ' ' << b.y();
    return Curve(name.str(), 0.0, 1.0, pos, d1, d2, false);
}

Curve reparametrize(const Curve& curve, double u0, double u1, std::function<double(double)> phi,
                    std::function<double(double)> dphi, std::function<double(double)> ddphi)
{
    auto pos = [curve, phi](double u) { return curve.position(phi(u)); };
    auto d1 = [curve, phi, dphi](double u) { return Vec2(curve.first_derivative(phi(u)) * dphi(u)); };
    Curve::Map d2;
    if (curve.has_second_derivative()) {
        d2 = [curve, phi, dphi, ddphi](double u) {
            const double t = phi(u);
            const double g = dphi(u);
            return Vec2(curve.second_derivative(t) * g * g + curve.first_derivative(t) * ddphi(u));
        };
    }
    return Curve(curve.name() + " (reparametrized)", u0, u1, pos, d1, d2, curve.closed())
        .with_orientation(curve.orientation());
}

Curve parse_curve(std::string_view spec)
{
    std::istringstream is{std::string(spec)};
    std::string kind;
    is >> kind;
    if (kind == "appendix") return appendix_curve();
    if (kind == "circle") {
        double radius = 1.0, cx = 0.0, cy = 0.0;
        std::string token;
        while (is >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) throw DomainError("malformed circle option: " + token);
            const std::string key = token.substr(0, eq);
            const double value = std::stod(token.substr(eq + 1));
            if (key == "R") radius = value;
            else if (key == "cx") cx = value;
            else if (key == "cy") cy = value;
            else throw DomainError("unknown circle option: " + key);
        }
        return circle_curve(radius, Vec2(cx, cy));
    }
    if (kind == "segment") {
        double x0, y0, x1, y1;
        if (!(is >> x0 >> y0 >> x1 >> y1)) throw DomainError("segment needs four coordinates");
        return segment_curve(Vec2(x0, y0), Vec2(x1, y1));
    }
    throw DomainError("unknown curve: " + std::string(spec));
}

}  // namespace ventcel
