#pragma once

#include "ventcel/coefficient.hpp"
#include "ventcel/mesh.hpp"

#include <Eigen/Sparse>

#include <memory>
#include <vector>

namespace ventcel {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Straight Ventcel edge of the polygonal boundary; node a sits at t_a < t_b.
struct VentcelEdge {
    int a = 0;
    int b = 0;
    int curve = 0;
    double t_a = 0.0;
    double t_b = 0.0;
    double length = 0.0;  ///< chord length
};

/// P1 space on the mesh nodes. Nodes touching a Dirichlet edge are fixed,
/// everything else is free; free nodes lying on a Ventcel edge carry the
/// boundary trace unknowns.
struct FeSpace {
    std::shared_ptr<const Mesh> mesh;
    std::vector<int> free_index;  ///< node -> position among free dofs, or -1
    std::vector<int> dirichlet_dofs;
    std::vector<int> ventcel_dofs;
    std::vector<int> free_dofs;
    std::vector<VentcelEdge> ventcel_edges;

    int node_count() const { return static_cast<int>(free_index.size()); }
    int free_count() const { return static_cast<int>(free_dofs.size()); }
    const Curve& ventcel_curve(int id) const;
};

/// Throws MeshError when validate() reports problems or the domain is missing.
FeSpace build_space(Mesh mesh);
FeSpace build_space(std::shared_ptr<const Mesh> mesh);

struct CoefficientBounds {
    double lambda2 = 0.0;  ///< min a2
    double Lambda2 = 0.0;  ///< max a2
    double M = 0.0;        ///< max |d a2 / ds|
    double lambda0 = 0.0;  ///< min a0
    double Lambda0 = 0.0;  ///< max a0
    double sigma0 = 0.0;   ///< M^2 / (2 lambda2) - lambda0
};

/// Extrema over the boundary Gauss points used by the assembly. With `check`,
/// throws EllipticityViolation when a2 <= 0 or a0 < 0 somewhere.
CoefficientBounds coefficient_bounds(const CoefficientField& a2, const CoefficientField& a0,
                                     const FeSpace& space, bool check = true);

struct AssemblyOptions {
    bool apply_sigma_shift = false;
    bool check_ellipticity = true;
};

/// Bilinear system restricted to the free dofs. rhs is left empty until
/// assemble_load fills it.
struct FeSystem {
    SparseMatrix matrix;
    Vector rhs;
    CoefficientBounds bounds;
    bool sigma_shift_applied = false;
};

/// Entry (i, j) is B(phi_j, phi_i): trial j, test i.
FeSystem assemble_bilinear(const FeSpace& space, const CoefficientField& a2, const CoefficientField& a0,
                           AssemblyOptions options = {});

/// Same form over all nodes (no Dirichlet elimination), optional boundary mass shift.
SparseMatrix bilinear_matrix_full(const FeSpace& space, const CoefficientField& a2,
                                  const CoefficientField& a0, double sigma = 0.0);

/// L_f(w) + L_g(w) for every node basis function.
Vector load_vector_full(const FeSpace& space, const LoadData& load);

/// Reduced right-hand side on the free dofs:
/// L_f(w) + L_g(w) - B(lift, w).
Vector assemble_load(const FeSpace& space, const LoadData& load, const CoefficientField& a2,
                     const CoefficientField& a0, const Vector& lifting);

SparseMatrix stiffness_matrix(const FeSpace& space);           ///< interior Dirichlet energy
SparseMatrix mass_matrix(const FeSpace& space);                ///< interior L2
SparseMatrix boundary_stiffness_matrix(const FeSpace& space);  ///< Ventcel d/ds energy, unit coefficient
SparseMatrix boundary_mass_matrix(const FeSpace& space);       ///< Ventcel L2

SparseMatrix restrict_to_free(const FeSpace& space, const SparseMatrix& full);
Vector restrict_to_free(const FeSpace& space, const Vector& full);
/// Free-dof vector -> all nodes, Dirichlet entries zero.
Vector extend_from_free(const FeSpace& space, const Vector& free);

/// Gram matrix of the V0 inner product on the free dofs.
SparseMatrix v0_gram(const FeSpace& space);

/// V0 norm; ContractViolation when v is non-zero on a Dirichlet dof.
double v0_norm(const FeSpace& space, const Vector& v);
/// Full composite norm including both mass terms.
double v_norm(const FeSpace& space, const Vector& v);

/// Nodal interpolant of a plane-defined field.
Vector interpolate(const FeSpace& space, const PlaneField& field);

/// One sampled point of the Dirichlet boundary.
struct BoundarySample {
    Vec2 point;
    double value = 0.0;
    int node = -1;  ///< mesh node when the sample is a Dirichlet node
};

/// Dirichlet data sampled at spacing <= h * spacing_factor along each edge,
/// including every Dirichlet node. DomainError when there is no Dirichlet edge.
std::vector<BoundarySample> dirichlet_samples(const FeSpace& space, const CoefficientField& phi,
                                              double spacing_factor = 0.25);

/// max |phi(p) - phi(q)| / |p - q| over sample pairs.
double lipschitz_estimate(const std::vector<BoundarySample>& samples);

/// min_q phi(q) + K |p - q| at every node, then phi itself at Dirichlet nodes.
Vector mcshane_lift(const FeSpace& space, const CoefficientField& phi, double K,
                    double spacing_factor = 0.25);

/// Lift with K = lipschitz_estimate of the samples.
Vector mcshane_lift(const FeSpace& space, const CoefficientField& phi);

}  // namespace ventcel
