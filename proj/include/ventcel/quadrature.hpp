#pragma once

#include <array>
#include <vector>

namespace ventcel::quad {

struct LineRule {
    std::vector<double> points;   ///< on [0, 1]
    std::vector<double> weights;  ///< sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1] (exact for degree 2n - 1).
const LineRule& gauss_legendre(int n);

struct TriangleRule {
    std::vector<std::array<double, 3>> barycentric;
    std::vector<double> weights;  ///< sum to 1 (multiply by the area)
};

/// Three interior points, exact for quadratics.
const TriangleRule& triangle3();

/// Six-point rule, exact for quartics.
const TriangleRule& triangle6();

}  // namespace ventcel::quad
