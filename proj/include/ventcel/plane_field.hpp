#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>

namespace ventcel {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Scalar field on the plane with optional analytic first and second derivatives.
///
/// Missing derivatives fall back to central differences with step
/// `1e-5 * scale`, where `scale` is the diameter of the region of interest.
struct PlaneField {
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;
    std::function<Mat2(const Vec2&)> hessian;
    double scale = 1.0;

    double operator()(const Vec2& p) const { return value(p); }
    Vec2 grad(const Vec2& p) const;
    Mat2 hess(const Vec2& p) const;
    double laplacian(const Vec2& p) const { return hess(p).trace(); }
    bool has_analytic_derivatives() const { return bool(gradient) && bool(hessian); }
};

/// x^3 - 3 x y^2, harmonic; its tangential second derivative vanishes on the
/// explicit membrane boundary curve.
PlaneField exact_appendix_field();

/// x + y.
PlaneField exact_affine_field();

/// log|x| / log 2: harmonic, zero on the unit circle and one on radius 2.
PlaneField exact_log_radial_field();

/// c00 + c10 x + c01 y + c20 x^2 + c11 x y + c02 y^2.
PlaneField polynomial_field(const std::array<double, 6>& c);

PlaneField constant_field(double c);

/// Looks up one of the names above ("exact_appendix", "exact_affine",
/// "exact_log_radial"); throws DomainError for unknown names.
PlaneField exact_field_by_name(const std::string& name);

}  // namespace ventcel
