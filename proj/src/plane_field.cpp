#include "ventcel/plane_field.hpp"

#include "ventcel/error.hpp"

#include <cmath>
#include <numbers>

namespace ventcel {

Vec2 PlaneField::grad(const Vec2& p) const
{
    if (gradient) return gradient(p);
    const double h = 1e-5 * scale;
    const Vec2 ex(h, 0.0);
    const Vec2 ey(0.0, h);
    return {(value(p + ex) - value(p - ex)) / (2 * h), (value(p + ey) - value(p - ey)) / (2 * h)};
}

Mat2 PlaneField::hess(const Vec2& p) const
{
    if (hessian) return hessian(p);
    const double h = 1e-5 * scale;
    const Vec2 ex(h, 0.0);
    const Vec2 ey(0.0, h);
    const double f0 = value(p);
    Mat2 H;
    H(0, 0) = (value(p + ex) - 2 * f0 + value(p - ex)) / (h * h);
    H(1, 1) = (value(p + ey) - 2 * f0 + value(p - ey)) / (h * h);
    H(0, 1) = (value(p + ex + ey) - value(p + ex - ey) - value(p - ex + ey) + value(p - ex - ey))
            / (4 * h * h);
    H(1, 0) = H(0, 1);
    return H;
}

PlaneField exact_appendix_field()
{
    PlaneField f;
    f.value = [](const Vec2& p) { return p.x() * p.x() * p.x() - 3 * p.x() * p.y() * p.y(); };
    f.gradient = [](const Vec2& p) {
        return Vec2(3 * p.x() * p.x() - 3 * p.y() * p.y(), -6 * p.x() * p.y());
    };
    f.hessian = [](const Vec2& p) {
        Mat2 H;
        H << 6 * p.x(), -6 * p.y(), -6 * p.y(), -6 * p.x();
        return H;
    };
    return f;
}

PlaneField exact_affine_field()
{
    PlaneField f;
    f.value = [](const Vec2& p) { return p.x() + p.y(); };
    f.gradient = [](const Vec2&) { return Vec2(1.0, 1.0); };
    f.hessian = [](const Vec2&) { return Mat2::Zero().eval(); };
    return f;
}

PlaneField exact_log_radial_field()
{
    PlaneField f;
    const double inv_log2 = 1.0 / std::numbers::ln2;
    f.value = [inv_log2](const Vec2& p) { return 0.5 * std::log(p.squaredNorm()) * inv_log2; };
    f.gradient = [inv_log2](const Vec2& p) { return Vec2(p * (inv_log2 / p.squaredNorm())); };
    f.hessian = [inv_log2](const Vec2& p) {
        const double r2 = p.squaredNorm();
        Mat2 H;
        H(0, 0) = (p.y() * p.y() - p.x() * p.x()) / (r2 * r2);
        H(1, 1) = -H(0, 0);
        H(0, 1) = H(1, 0) = -2 * p.x() * p.y() / (r2 * r2);
        return Mat2(H * inv_log2);
    };
    return f;
}

PlaneField polynomial_field(const std::array<double, 6>& c)
{
    PlaneField f;
    f.value = [c](const Vec2& p) {
        const double x = p.x(), y = p.y();
        return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    };
    f.gradient = [c](const Vec2& p) {
        return Vec2(c[1] + 2 * c[3] * p.x() + c[4] * p.y(), c[2] + c[4] * p.x() + 2 * c[5] * p.y());
    };
    f.hessian = [c](const Vec2&) {
        Mat2 H;
        H << 2 * c[3], c[4], c[4], 2 * c[5];
        return H;
    };
    return f;
}

PlaneField constant_field(double c)
{
    return polynomial_field({c, 0, 0, 0, 0, 0});
}

PlaneField exact_field_by_name(const std::string& name)
{
    if (name == "exact_appendix") return exact_appendix_field();
    if (name == "exact_affine") return exact_affine_field();
    if (name == "exact_log_radial") return exact_log_radial_field();
    throw DomainError("unknown exact-solution builtin: " + name);
}

}  // namespace ventcel
