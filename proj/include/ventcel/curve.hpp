#pragma once

#include "ventcel/plane_field.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ventcel {

/// Planar parametric curve r(t) = (x(t), y(t)) on [t0, t1] with analytic
/// first and (optionally) second derivatives.
///
/// The stored orientation decides which side is "outward": +1 means the
/// outward unit normal is the left normal (-y', x') / |r'|, -1 the right one.
/// It is a property of the curve/domain pair and is set when the domain is
/// built.
class Curve {
public:
    using Map = std::function<Vec2(double)>;

    Curve() = default;
    Curve(std::string name, double t0, double t1, Map position, Map first_deriv,
          Map second_deriv = {}, bool closed = false);

    const std::string& name() const noexcept { return name_; }
    double t_begin() const noexcept { return t0_; }
    double t_end() const noexcept { return t1_; }
    bool closed() const noexcept { return closed_; }
    int orientation() const noexcept { return orientation_; }
    bool has_second_derivative() const noexcept { return bool(d2_); }

    Curve with_orientation(int orientation) const;

    bool contains(double t) const noexcept { return t >= t0_ && t <= t1_; }

    // Raw analytic maps; no range check, so finite-difference stencils may
    // step slightly past the endpoints of an open curve.
    Vec2 position(double t) const { return pos_(t); }
    Vec2 first_derivative(double t) const { return d1_(t); }
    Vec2 second_derivative(double t) const;
    double speed(double t) const { return d1_(t).norm(); }

private:
    std::string name_;
    double t0_ = 0.0;
    double t1_ = 1.0;
    Map pos_;
    Map d1_;
    Map d2_;
    bool closed_ = false;
    int orientation_ = 1;
};

/// Curve point at t; DomainError outside [t0, t1].
Vec2 eval_curve(const Curve& curve, double t);

/// s(t) = integral of |r'| from t0 to t, adaptive Simpson to relative 1e-10.
/// Throws NumericalError when the recursion budget is exhausted.
double arc_length(const Curve& curve, double t);

/// Arc length between two parameters (a may exceed b; the result is signed).
double arc_length_between(const Curve& curve, double a, double b);

/// Cumulative arc-length samples on a uniform parameter grid, with inverse lookup.
class ArcLengthTable {
public:
    static constexpr int default_samples = 4096;

    explicit ArcLengthTable(Curve curve, int samples = default_samples);

    double total_length() const noexcept { return s_.back(); }
    const Curve& curve() const noexcept { return curve_; }
    const std::vector<double>& parameters() const noexcept { return t_; }
    const std::vector<double>& lengths() const noexcept { return s_; }

    /// Arc length at parameter t using the table plus a local quadrature.
    double length_at(double t) const;

    /// Parameter t(s); DomainError when s is outside [0, L].
    double parameter_at(double s) const;

private:
    Curve curve_;
    std::vector<double> t_;
    std::vector<double> s_;
};

double inverse_arc_length(const ArcLengthTable& table, double s);

/// Signed curvature (x'y'' - y'x'') / |r'|^3. Requires a second derivative.
double curvature(const Curve& curve, double t);

struct TangentNormal {
    Vec2 tangent;
    Vec2 normal;  ///< outward, according to the curve's orientation flag
};

TangentNormal tangent_normal(const Curve& curve, double t);

/// Intrinsic derivatives of a plane field along a curve at one parameter.
struct BoundaryFieldSample {
    double u_tau = 0.0;      ///< tau . Du
    double u_tautau = 0.0;   ///< tau^T D^2u tau
    double u_nu = 0.0;       ///< outward normal derivative
    double u_s = 0.0;        ///< d/ds by finite differences in arc length
    double u_ss = 0.0;       ///< d2/ds2 by finite differences in arc length
    double u_ss_identity = 0.0;  ///< u_tautau + kappa * (left-normal derivative)
    double kappa = 0.0;
};

/// Finite-difference step (in arc length) used for u_s and u_ss.
double arc_length_fd_step(const Curve& curve);

BoundaryFieldSample boundary_field_sample(const PlaneField& field, const Curve& curve, double t);

/// |u_ss (finite differences) - u_tautau - kappa * u_nu|, with u_nu taken
/// along the left normal so the identity holds for either orientation.
double equivalence_residual(const PlaneField& field, const Curve& curve, double t);

/// Gauss-Legendre estimate of the total length; cheap, for step-size choices.
double approximate_length(const Curve& curve);

/// Parameter reached after travelling arc length ds from t (ds may be negative).
double advance_by_arc_length(const Curve& curve, double t, double ds);

/// Invariant violations found by sampling (regularity, closure, simplicity).
std::vector<std::string> check_curve(const Curve& curve, int samples = 1000);

// Registry.

/// (t, 1) / ((2 - rho)^(2/3) (1 + rho)^(1/3)), rho = sqrt(1 + t^2), t in [-1, 1].
Curve appendix_curve();

/// Counterclockwise circle of radius R, t in [0, 2 pi].
Curve circle_curve(double radius, const Vec2& center = Vec2::Zero());

/// Straight segment a -> b, t in [0, 1].
Curve segment_curve(const Vec2& a, const Vec2& b);

/// Composition r(phi(u)) for a smooth increasing phi: [u0, u1] -> [t0, t1].
Curve reparametrize(const Curve& curve, double u0, double u1, std::function<double(double)> phi,
                    std::function<double(double)> dphi, std::function<double(double)> ddphi);

/// "appendix", "circle R=<r>", "segment <x0> <y0> <x1> <y1>".
Curve parse_curve(std::string_view spec);

}  // namespace ventcel
