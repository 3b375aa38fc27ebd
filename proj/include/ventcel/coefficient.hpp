#pragma once

#include "ventcel/curve.hpp"
#include "ventcel/plane_field.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ventcel {

/// One boundary sample of nodal coefficient data.
struct NodalSample {
    int curve = 0;
    double t = 0.0;
    double value = 0.0;
};

/// Scalar coefficient evaluable on the plane and/or along boundary curves.
///
/// Boundary queries identify the curve by its index in the domain's Ventcel
/// (or Dirichlet) list; only nodal data actually uses the index.
class CoefficientField {
public:
    enum class Kind { Constant, Builtin, Polynomial, Nodal };

    using BoundaryMap = std::function<double(const Curve&, int, double)>;

    /// The zero constant.
    CoefficientField();

    static CoefficientField constant(double c);
    static CoefficientField polynomial(const std::array<double, 6>& c);
    /// Named plane field; tangential derivative from its gradient.
    static CoefficientField plane(PlaneField field, std::string name);
    /// 1/kappa along the curve; no plane values, tangential derivative by differences.
    static CoefficientField inverse_curvature();
    static CoefficientField nodal(std::vector<NodalSample> samples, std::string source);
    /// Boundary-only field given by an arbitrary map; `derivative` may be empty.
    static CoefficientField boundary(BoundaryMap value, BoundaryMap derivative, std::string name);

    Kind kind() const noexcept { return kind_; }
    /// Text form accepted by parse_coefficient (for builtins, the registry name).
    const std::string& spec() const noexcept { return spec_; }

    bool is_zero() const noexcept { return kind_ == Kind::Constant && constant_ == 0.0; }
    bool defined_on_plane() const noexcept { return bool(plane_); }
    bool has_analytic_tangential_derivative() const noexcept { return bool(tangential_); }

    /// Plane value; ContractViolation for boundary-only fields.
    double at(const Vec2& p) const;
    double on_curve(const Curve& curve, int curve_id, double t) const;
    /// d/ds along the curve: analytic when available, otherwise a central
    /// difference in arc length with step 1e-6 * L.
    double tangential_derivative(const Curve& curve, int curve_id, double t) const;
    double tangential_derivative_fd(const Curve& curve, int curve_id, double t) const;

private:
    Kind kind_ = Kind::Constant;
    std::string spec_;
    double constant_ = 0.0;
    std::function<double(const Vec2&)> plane_;
    BoundaryMap boundary_;
    BoundaryMap tangential_;
};

/// "const:<v>", "poly:<c00>,<c10>,<c01>,<c20>,<c11>,<c02>", "inv_curvature",
/// "nodal:<csv>" (header curve_id,t,value) or an exact-field name.
/// Throws DomainError with a readable message on malformed input.
CoefficientField parse_coefficient(const std::string& text);

std::vector<NodalSample> read_nodal_csv(const std::string& path);

/// Right-hand side data: f = f1 + div(f2) in the domain, g = g1 + d/ds g2 on the Ventcel curves.
struct LoadData {
    CoefficientField f1;
    CoefficientField f2x;
    CoefficientField f2y;
    CoefficientField g1;
    CoefficientField g2;
};

}  // namespace ventcel
