#pragma once

#include "ventcel/domain.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ventcel {

enum class EdgeTag { Dirichlet, Ventcel };

/// A boundary edge. `curve` indexes DomainSpec::ventcel_curves for Ventcel
/// edges and DomainSpec::dirichlet_pieces for Dirichlet edges (-1 when the
/// edge is not attached to a curve). nodes[0] sits at t_a, nodes[1] at t_b,
/// with t_a < t_b.
struct BoundaryEdge {
    std::array<int, 2> nodes{};
    EdgeTag tag = EdgeTag::Dirichlet;
    int curve = -1;
    double t_a = 0.0;
    double t_b = 0.0;

    bool operator==(const BoundaryEdge&) const = default;
};

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  ///< counterclockwise
    std::vector<BoundaryEdge> boundary_edges;
    double h = 0.0;                              ///< max element diameter
    std::shared_ptr<const DomainSpec> domain;    ///< needed for curve snapping

    std::size_t node_count() const noexcept { return nodes.size(); }
    double signed_area(std::size_t tri) const;
};

/// Structured mapped triangulation with n subdivisions per reference direction.
/// Throws DomainError for n < 2 and MeshError if the curve height lookup fails.
Mesh triangulate(const DomainSpec& spec, int n);
Mesh triangulate(std::shared_ptr<const DomainSpec> spec, int n);

/// Red refinement: every triangle split in four; boundary midpoints snapped
/// onto their curve at the parameter midpoint.
Mesh refine(const Mesh& mesh);

/// Mesh invariants; one message per violation, empty when valid.
std::vector<std::string> validate(const Mesh& mesh);

double max_edge_length(const Mesh& mesh);
double mesh_area(const Mesh& mesh);
/// 2 * inradius / circumradius, 1 for equilateral triangles.
double triangle_quality(const Mesh& mesh, std::size_t tri);
double min_triangle_quality(const Mesh& mesh);
/// Polyline length of the boundary edges with the given tag (and curve, if >= 0).
double tagged_length(const Mesh& mesh, EdgeTag tag, int curve = -1);

/// Line-oriented text format ("ventcel-mesh v1"), 17 significant digits.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace ventcel
