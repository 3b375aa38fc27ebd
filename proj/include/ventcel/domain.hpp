#pragma once

#include "ventcel/curve.hpp"

#include <string>
#include <vector>

namespace ventcel {

enum class DomainKind { Appendix, Annulus, Square };
enum class AnnulusNu { Inner, Outer };

/// Boundary decomposition of one of the supported domains: disjoint Ventcel
/// curves (with outward orientation flags) and the Dirichlet pieces covering
/// the rest of the boundary.
struct DomainSpec {
    DomainKind kind = DomainKind::Square;
    std::vector<Curve> ventcel_curves;
    std::vector<Curve> dirichlet_pieces;
    double r_inner = 0.0;  ///< annulus only
    double r_outer = 0.0;  ///< annulus only
    AnnulusNu nu_on = AnnulusNu::Outer;

    /// Canonical text form accepted by parse_domain().
    std::string describe() const;
};

/// Region under the explicit membrane curve: Ventcel on the curve, Dirichlet
/// on the two vertical sides and the bottom segment on the x-axis.
DomainSpec build_appendix_domain();

/// Annulus R0 < |x| < R1 with the Ventcel condition on the chosen circle.
DomainSpec build_annulus(double r_inner, double r_outer, AnnulusNu nu_on);

/// (0,1) x (1,2): Ventcel on y = 1 and y = 2, Dirichlet on x = 0 and x = 1.
DomainSpec build_square();

/// "appendix", "square", "annulus" (defaults 1,2,outer) or "annulus:R0,R1,inner|outer".
DomainSpec parse_domain(const std::string& text);

double total_length(const std::vector<Curve>& curves);

/// Domain-level invariants (positive Dirichlet length, disjoint Ventcel curves,
/// regular curves). Empty when valid.
std::vector<std::string> check_domain(const DomainSpec& spec);

}  // namespace ventcel
