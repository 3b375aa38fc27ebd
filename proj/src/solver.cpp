#include "ventcel/solver.hpp"

#include "ventcel/error.hpp"
#include "ventcel/quadrature.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ventcel {

namespace {

using LU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

double one_norm(const SparseMatrix& A)
{
    double best = 0.0;
    for (int j = 0; j < A.outerSize(); ++j) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(A, j); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

// Hager's estimate of ||A^{-1}||_1 with Higham's alternating-sign safeguard.
double inverse_one_norm(LU& lu, int n)
{
    if (n == 0) return 0.0;
    Vector x = Vector::Constant(n, 1.0 / n);
    double est = 0.0;
    int last_j = -1;
    for (int iter = 0; iter < 5; ++iter) {
        const Vector y = lu.solve(x);
        est = std::max(est, y.lpNorm<1>());
        Vector xi(n);
        for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const Vector z = lu.transpose().solve(xi);
        int j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (zmax <= z.dot(x) || j == last_j) break;
        x.setZero();
        x[j] = 1.0;
        last_j = j;
    }
    Vector b(n);
    for (int i = 0; i < n; ++i) {
        b[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + (n > 1 ? static_cast<double>(i) / (n - 1) : 0.0));
    }
    const Vector y = lu.solve(b);
    return std::max(est, 2.0 * y.lpNorm<1>() / (3.0 * n));
}

double relative_residual(const SparseMatrix& A, const Vector& x, const Vector& b)
{
    const double nb = b.norm();
    const double r = (b - A * x).norm();
    return nb > 0.0 ? r / nb : r;
}

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Vector solve_linear(const SparseMatrix& A, const Vector& b, SolveStats* stats, const LinearSolveOptions& options)
{
    if (A.rows() != A.cols()) throw ContractViolation("solve_linear: matrix is not square");
    if (A.rows() != b.size()) throw ContractViolation("solve_linear: size mismatch");
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    const int n = static_cast<int>(A.rows());
    if (n == 0) {
        st = SolveStats{"sparse-lu", 0, 1.0, 0.0};
        return Vector();
    }
    if (n > options.iterative_threshold) {
        Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> krylov;
        krylov.setTolerance(options.tolerance);
        krylov.setMaxIterations(std::max(1000, 10 * n));
        krylov.compute(A);
        if (krylov.info() != Eigen::Success) throw SingularSystem("ILUT preconditioner breakdown");
        Vector x = krylov.solve(b);
        st.method = "bicgstab-ilut";
        st.iterations = static_cast<int>(krylov.iterations());
        st.rcond = 0.0;
        st.residual = relative_residual(A, x, b);
        if (krylov.info() != Eigen::Success || !(st.residual < 1e3 * options.tolerance)) {
            throw SingularSystem("BiCGSTAB did not converge (relative residual " + fmt17(st.residual) + ")");
        }
        return x;
    }
    SparseMatrix Ac = A;
    Ac.makeCompressed();
    LU lu;
    lu.compute(Ac);
    if (lu.info() != Eigen::Success) throw SingularSystem("sparse LU breakdown: " + lu.lastErrorMessage());
    Vector x = lu.solve(b);
    st.method = "sparse-lu";
    st.iterations = 0;
    st.residual = relative_residual(Ac, x, b);
    for (int k = 0; k < 3 && st.residual > 1e-15; ++k) {
        const Vector dx = lu.solve(b - Ac * x);
        const Vector candidate = x + dx;
        const double r = relative_residual(Ac, candidate, b);
        if (!(r < st.residual)) break;
        x = candidate;
        st.residual = r;
        ++st.iterations;
    }
    const double inv = inverse_one_norm(lu, n);
    const double anorm = one_norm(Ac);
    st.rcond = (inv > 0.0 && anorm > 0.0) ? 1.0 / (anorm * inv) : 0.0;
    if (!std::isfinite(x.sum())) throw SingularSystem("sparse LU produced non-finite values");
    return x;
}

Vector solve_linear(const FeSystem& system, SolveStats* stats, const LinearSolveOptions& options)
{
    return solve_linear(system.matrix, system.rhs, stats, options);
}

UniquenessReport uniqueness_diagnostic(const SparseMatrix& A)
{
    UniquenessReport rep;
    const int n = static_cast<int>(A.rows());
    if (n == 0) {
        rep.note = "empty system";
        return rep;
    }
    SparseMatrix Ac = A;
    Ac.makeCompressed();
    LU lu;
    lu.compute(Ac);
    if (lu.info() != Eigen::Success) {
        rep.singular = true;
        rep.note = "factorization breakdown: " + lu.lastErrorMessage();
        return rep;
    }
    const double inv = inverse_one_norm(lu, n);
    rep.rcond = (inv > 0.0) ? 1.0 / (one_norm(Ac) * inv) : 0.0;
    // Inverse iteration on A^T A: x <- A^{-1} A^{-T} x.
    Vector x = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int i = 0; i < n; ++i) x[i] *= 1.0 + 0.1 * std::sin(1.0 + i);
    x.normalize();
    double growth = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Vector y = lu.solve(Vector(lu.transpose().solve(x)));
        growth = y.norm();
        if (!(growth > 0.0) || !std::isfinite(growth)) break;
        x = y / growth;
    }
    rep.sigma_min = (growth > 0.0 && std::isfinite(growth)) ? 1.0 / std::sqrt(growth) : 0.0;
    rep.singular = !(rep.rcond >= 1e-14);
    rep.note = rep.singular ? "numerically singular" : "nonsingular";
    return rep;
}

UniquenessReport uniqueness_diagnostic(const FeSystem& system)
{
    return uniqueness_diagnostic(system.matrix);
}

SolutionField solve_ventcel(const VentcelProblem& problem, std::shared_ptr<const FeSpace> space,
                            const LinearSolveOptions& options)
{
    if (!space) throw ContractViolation("solve_ventcel: null space");
    SolutionField sol;
    sol.space = space;
    FeSystem sys = assemble_bilinear(*space, problem.a2, problem.a0);
    sol.bounds = sys.bounds;
    if (problem.phi.is_zero()) {
        sol.lifting = Vector::Zero(space->node_count());
    } else if (problem.lipschitz > 0.0) {
        sol.lifting = mcshane_lift(*space, problem.phi, problem.lipschitz);
    } else {
        sol.lifting = mcshane_lift(*space, problem.phi);
    }
    sys.rhs = assemble_load(*space, problem.load, problem.a2, problem.a0, sol.lifting);
    const Vector v = solve_linear(sys, &sol.stats, options);
    if (sol.stats.method == "sparse-lu" && sol.stats.rcond < 1e-14) {
        throw SingularSystem("discrete system is numerically singular (rcond " + fmt17(sol.stats.rcond) + ")");
    }
    sol.residual_norm = sol.stats.residual;
    sol.values = sol.lifting;
    for (int k = 0; k < space->free_count(); ++k) sol.values[space->free_dofs[k]] += v[k];
    return sol;
}

SolutionField solve_ventcel(const VentcelProblem& problem, const Mesh& mesh, const LinearSolveOptions& options)
{
    Mesh copy = mesh;
    if (!copy.domain) copy.domain = std::make_shared<const DomainSpec>(problem.spec);
    return solve_ventcel(problem, std::make_shared<const FeSpace>(build_space(std::move(copy))), options);
}

ShiftedSolve shift_corrected_solve(const FeSpace& space, const CoefficientField& a2, const CoefficientField& a0,
                                   const Vector& rhs, int max_iterations, double tolerance)
{
    const FeSystem plain = assemble_bilinear(space, a2, a0);
    const FeSystem shifted = assemble_bilinear(space, a2, a0, {.apply_sigma_shift = true});
    SparseMatrix S = shifted.matrix;
    S.makeCompressed();
    LU lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success) throw SingularSystem("shifted matrix factorization failed");
    ShiftedSolve out;
    out.solution = Vector::Zero(rhs.size());
    const double nb = rhs.norm() > 0.0 ? rhs.norm() : 1.0;
    out.defect = rhs.norm() / nb;
    while (out.iterations < max_iterations && out.defect > tolerance) {
        const Vector defect = rhs - plain.matrix * out.solution;
        out.solution += lu.solve(defect);
        ++out.iterations;
        out.defect = (rhs - plain.matrix * out.solution).norm() / nb;
        if (!std::isfinite(out.defect)) throw NumericalError("defect correction diverged", out.defect);
    }
    return out;
}

LoadData manufactured_load(const PlaneField& exact, const CoefficientField& a2, const CoefficientField& a0)
{
    auto u = std::make_shared<const PlaneField>(exact);
    LoadData load;
    PlaneField f1;
    f1.value = [u](const Vec2& p) { return -u->laplacian(p); };
    f1.scale = exact.scale;
    load.f1 = CoefficientField::plane(f1, "manufactured_f1");
    auto g = [u, a2, a0](const Curve& c, int id, double t) {
        const Vec2 p = c.position(t);
        const Vec2 d1 = c.first_derivative(t);
        const Vec2 tau = d1 / d1.norm();
        const Vec2 left(-tau.y(), tau.x());
        const Vec2 grad = u->grad(p);
        const double u_nu = c.orientation() * grad.dot(left);
        const double u_ss = tau.dot(u->hess(p) * tau) + curvature(c, t) * grad.dot(left);
        return u_nu - a2.on_curve(c, id, t) * u_ss + a0.on_curve(c, id, t) * (*u)(p);
    };
    load.g1 = CoefficientField::boundary(g, {}, "manufactured_g1");
    return load;
}

void write_solution_csv(std::ostream& os, const SolutionField& solution)
{
    const Mesh& mesh = *solution.space->mesh;
    os << "x,y,u\n";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        os << fmt17(mesh.nodes[i].x()) << ',' << fmt17(mesh.nodes[i].y()) << ','
           << fmt17(solution.values[static_cast<Eigen::Index>(i)]) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const SolutionField& solution)
{
    const FeSpace& space = *solution.space;
    std::vector<ArcLengthTable> tables;
    for (const auto& c : space.mesh->domain->ventcel_curves) tables.emplace_back(c, 256);
    const auto& rule = quad::gauss_legendre(3);
    os << "curve_id,t,s,u,u_tau\n";
    for (const auto& e : space.ventcel_edges) {
        const double ua = solution.values[e.a], ub = solution.values[e.b];
        const double slope = (ub - ua) / e.length;
        for (double xi : rule.points) {
            const double t = e.t_a + xi * (e.t_b - e.t_a);
            os << e.curve << ',' << fmt17(t) << ',' << fmt17(tables[static_cast<std::size_t>(e.curve)].length_at(t))
               << ',' << fmt17((1.0 - xi) * ua + xi * ub) << ',' << fmt17(slope) << '\n';
        }
    }
}

}  // namespace ventcel
