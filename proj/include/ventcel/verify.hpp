#pragma once

#include "ventcel/solver.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace ventcel {

/// Deterministic uniform(-1, 1) stream (splitmix64), identical on every platform.
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed) : state_(seed) {}
    double next();
    Vector vector(int n);

private:
    std::uint64_t state_;
};

/// Random discrete V0 field: uniform(-1, 1) on free dofs, zero on Dirichlet dofs.
Vector random_v0_field(const FeSpace& space, SeededUniform& rng);

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;    ///< lhs / rhs (0 when both vanish)
    double measure = 0.0;  ///< |I~|, the length of the set where min < v < max
    bool pass = false;     ///< lhs <= rhs (1 + 1e-8)
};

/// Samples (s_k, v_k) with s increasing. Both integrals use the piecewise
/// linear interpolant (trapezoid for (v - v0)^2, exact slopes for v'),
/// restricted to subintervals with an endpoint strictly between min and max.
InequalityReport interval_poincare_check(const std::vector<double>& s, const std::vector<double>& v,
                                         std::string name = "interval");
/// Uniform sampling of v on [a, b]; n_samples >= 100.
InequalityReport interval_poincare_check(const std::function<double(double)>& v, double a, double b,
                                         int n_samples, std::string name = "interval");

/// Same inequality in arc length along a curve, samples uniform in s.
InequalityReport curve_poincare_check(const PlaneField& w, const Curve& curve, int n_samples,
                                      std::string name = "curve");

struct TraceEstimate {
    double L = 0.0;
    std::string maximizer;  ///< "random #k", "hat node i" or "eigenvector"
    Vector field;           ///< maximizing nodal field (all nodes)
    int skipped = 0;        ///< zero-energy random fields skipped
};

/// max ||v||_{L2(Gamma_nu)} / ||Dv||_{L2} over seeded random V0 fields, every
/// hat function and the generalized eigenvector from 200 power steps.
TraceEstimate trace_poincare_estimate(const FeSpace& space, int n_random, std::uint64_t seed);

struct CounterexampleReport {
    double tangential_seminorm = 0.0;  ///< ||d w / ds||_{L2(Gamma_nu)}
    double trace_l2_squared = 0.0;     ///< ||w||^2_{L2(Gamma_nu)}
    double expected = 0.0;             ///< 2 pi R1
    double relative_error = 0.0;
    double max_outer_deviation = 0.0;  ///< max |w - 1| on outer-circle nodes
    bool pass = false;
};

/// w = (|x| - R0) / (R1 - R0) interpolated on the annulus with the Ventcel
/// condition on the outer circle. ContractViolation for the inner choice.
CounterexampleReport poincare_counterexample(double r_inner, double r_outer, int n,
                                             AnnulusNu nu_on = AnnulusNu::Outer);

struct CoercivityReport {
    double min_quotient = 0.0;  ///< min v^T sym(A) v / v^T G v, from below to 1e-13
    double ritz_value = 0.0;    ///< subspace-iteration upper estimate
    int iterations = 0;
    bool converged = false;     ///< Ritz residual reached 1e-10
    double certified_bound = 0.0;
    bool certified = false;     ///< sym(A) - certified_bound G passed an LDL^T positivity test
};

/// Smallest eigenvalue of the pencil (sym(A), G). Shifted inverse subspace
/// iteration with Rayleigh-Ritz gives an upper estimate, which is then
/// refined by bisection on the positivity of LDL^T pivots of sym(A) - alpha G.
/// When `bound` is given, also checks that sym(A) - (bound - 1e-8) G is
/// positive definite.
CoercivityReport coercivity_eigencheck(const SparseMatrix& A, const SparseMatrix& G,
                                       double bound = std::numeric_limits<double>::quiet_NaN());

struct ContinuityReport {
    double constant = 0.0;   ///< 1 + Lambda2 + M L + (Lambda0 + sigma) L^2
    double max_ratio = 0.0;  ///< max |w^T A v| / (||v||_G ||w||_G)
    int pairs = 0;
    bool pass = false;
};

ContinuityReport continuity_check(const SparseMatrix& A, const SparseMatrix& G, const CoefficientBounds& bounds,
                                  double L, int n_random, std::uint64_t seed, bool shifted = false);

struct WeakResidualReport {
    double max_residual = 0.0;  ///< max |lhs - rhs| / (1 + |rhs|)
    int fields = 0;
};

/// Weak form evaluated by element loops independent of the assembled matrix.
WeakResidualReport weak_residual_check(const SolutionField& solution, const VentcelProblem& problem,
                                       int n_random, std::uint64_t seed);

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    double e_l2 = 0.0;
    double e_v0 = 0.0;
    double e_trace = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double order_l2 = 0.0;     ///< least-squares slope of log e vs log h
    double order_v0 = 0.0;
    double order_trace = 0.0;
    bool monotone = false;     ///< errors decrease (5% slack on the coarsest pair)
};

struct ErrorNorms {
    double l2 = 0.0;
    double v0 = 0.0;
    double trace = 0.0;
};

/// Errors of a discrete solution against an exact field on the polygonal
/// domain (6-point triangle rule, 5-point Gauss on boundary edges).
ErrorNorms solution_errors(const SolutionField& solution, const PlaneField& exact);

/// Solves on n0, 2 n0, ... (levels >= 3). Requires problem.exact.
ConvergenceReport manufactured_convergence(const VentcelProblem& problem, int n0, int levels);

/// "n,h,e_L2,e_V0,e_trace,order_L2,order_V0"; orders between consecutive rows.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

/// A function along a curve given in its own parameter.
struct CurveFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;  ///< d/dt
};

struct IbpReport {
    double lhs = 0.0;           ///< int (a2 w_s + w a2_s) u_s ds
    double rhs = 0.0;           ///< -int a2 w u_ss ds
    double endpoint_term = 0.0; ///< [a2 w u_s] between the ends
    double difference = 0.0;    ///< |lhs - rhs - endpoint_term|
    bool pass = false;          ///< |lhs - rhs| < 1e-6
};

/// Composite Gauss-Legendre (10 points per panel) with analytic u_s and
/// u_ss = u_tautau + kappa * (left normal derivative).
IbpReport ibp_identity_check(const Curve& curve, const CoefficientField& a2, const PlaneField& u,
                             const CurveFunction& w, int panels = 256);

struct CompatibilityReport {
    double max_u_tautau = 0.0;
    double max_equivalence_residual = 0.0;
    int samples = 0;
};

/// |u_tautau| and the equivalence residual at uniform parameters.
CompatibilityReport compatibility_check(const PlaneField& u, const Curve& curve, int samples);

}  // namespace ventcel
