#pragma once

#include "ventcel/fem.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace ventcel {

struct SolveStats {
    std::string method;        ///< "sparse-lu" or "bicgstab-ilut"
    int iterations = 0;        ///< Krylov iterations or refinement steps
    double rcond = 0.0;        ///< reciprocal 1-norm condition estimate (LU path only)
    double residual = 0.0;     ///< ||b - A x|| / ||b|| (0 for b = 0)
};

struct LinearSolveOptions {
    int iterative_threshold = 200000;  ///< unknowns above which the Krylov path is used
    double tolerance = 1e-12;
};

/// Sparse LU with partial pivoting (COLAMD ordering) plus iterative
/// refinement, or BiCGSTAB with ILUT above the size threshold.
/// Throws SingularSystem on factorization breakdown or non-convergence.
Vector solve_linear(const SparseMatrix& A, const Vector& b, SolveStats* stats = nullptr,
                    const LinearSolveOptions& options = {});
Vector solve_linear(const FeSystem& system, SolveStats* stats = nullptr, const LinearSolveOptions& options = {});

struct VentcelProblem {
    DomainSpec spec;
    CoefficientField a2 = CoefficientField::constant(1.0);
    CoefficientField a0;
    LoadData load;
    CoefficientField phi;
    double lipschitz = 0.0;  ///< McShane constant; <= 0 means estimate from the data
    std::optional<PlaneField> exact;
};

struct SolutionField {
    std::shared_ptr<const FeSpace> space;
    Vector values;   ///< u at every node
    Vector lifting;  ///< McShane lift used for the reduction
    double residual_norm = 0.0;
    SolveStats stats;
    CoefficientBounds bounds;
};

/// Lift, assemble (unshifted), solve on the free dofs and add the lift back.
/// Dirichlet nodes carry phi exactly. SingularSystem when rcond < 1e-14.
SolutionField solve_ventcel(const VentcelProblem& problem, std::shared_ptr<const FeSpace> space,
                            const LinearSolveOptions& options = {});
SolutionField solve_ventcel(const VentcelProblem& problem, const Mesh& mesh,
                            const LinearSolveOptions& options = {});

struct UniquenessReport {
    double rcond = 0.0;
    double sigma_min = 0.0;  ///< smallest singular value, 20 steps of inverse iteration on A^T A
    bool singular = false;   ///< rcond < 1e-14 or factorization breakdown
    std::string note;
};

UniquenessReport uniqueness_diagnostic(const SparseMatrix& A);
UniquenessReport uniqueness_diagnostic(const FeSystem& system);

/// Solve B v = rhs through the shifted matrix B + sigma0 Mb by defect correction
/// v <- v + (B + sigma0 Mb)^{-1} (rhs - B v), starting from zero.
struct ShiftedSolve {
    Vector solution;
    int iterations = 0;
    double defect = 0.0;  ///< final ||rhs - B v|| / ||rhs||
};
ShiftedSolve shift_corrected_solve(const FeSpace& space, const CoefficientField& a2, const CoefficientField& a0,
                                   const Vector& rhs, int max_iterations = 200, double tolerance = 1e-13);

/// f1 = -Laplace(u) and g1 = u_nu - a2 u_ss + a0 u on the Ventcel curves, so
/// that `exact` solves the problem; f2 = g2 = 0.
LoadData manufactured_load(const PlaneField& exact, const CoefficientField& a2, const CoefficientField& a0);

/// "x,y,u", one row per node.
void write_solution_csv(std::ostream& os, const SolutionField& solution);
/// "curve_id,t,s,u,u_tau" at the boundary Gauss points of every Ventcel edge.
void write_trace_csv(std::ostream& os, const SolutionField& solution);

}  // namespace ventcel
