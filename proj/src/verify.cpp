#include "ventcel/verify.hpp"

#include "ventcel/error.hpp"
#include "ventcel/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace ventcel {

namespace {

constexpr double kInequalitySlack = 1e-8;
constexpr double kInteriorTol = 1e-12;

struct ElementData {
    std::array<Vec2, 3> grad;
    double area = 0.0;
};

ElementData element_data(const Mesh& mesh, const std::array<int, 3>& tri)
{
    const Vec2& p0 = mesh.nodes[tri[0]];
    const Vec2& p1 = mesh.nodes[tri[1]];
    const Vec2& p2 = mesh.nodes[tri[2]];
    const double det = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
    ElementData d;
    d.area = 0.5 * det;
    d.grad[0] = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    d.grad[1] = Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    d.grad[2] = Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    return d;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using LDLT = Eigen::SimplicialLDLT<SparseMatrix>;

bool positive_definite(const LDLT& ldlt)
{
    return ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
}

}  // namespace

double SeededUniform::next()
{
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
}

Vector SeededUniform::vector(int n)
{
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = next();
    return v;
}

Vector random_v0_field(const FeSpace& space, SeededUniform& rng)
{
    Vector v = Vector::Zero(space.node_count());
    for (int d : space.free_dofs) v[d] = rng.next();
    return v;
}

InequalityReport interval_poincare_check(const std::vector<double>& s, const std::vector<double>& v,
                                         std::string name)
{
    if (s.size() != v.size() || s.size() < 2) throw ContractViolation("interval_poincare_check: bad samples");
    InequalityReport rep;
    rep.name = std::move(name);
    const double v0 = *std::min_element(v.begin(), v.end());
    const double v1 = *std::max_element(v.begin(), v.end());
    auto inside = [&](double x) { return x > v0 + kInteriorTol && x < v1 - kInteriorTol; };
    double lhs = 0.0, energy = 0.0, measure = 0.0;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        if (!inside(v[k]) && !inside(v[k + 1])) continue;
        const double ds = s[k + 1] - s[k];
        measure += ds;
        lhs += 0.5 * ds * ((v[k] - v0) * (v[k] - v0) + (v[k + 1] - v0) * (v[k + 1] - v0));
        const double slope = (v[k + 1] - v[k]) / ds;
        energy += ds * slope * slope;
    }
    rep.lhs = lhs;
    rep.measure = measure;
    rep.rhs = measure * measure * energy;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.pass = rep.lhs <= rep.rhs * (1.0 + kInequalitySlack);
    return rep;
}

InequalityReport interval_poincare_check(const std::function<double(double)>& v, double a, double b,
                                         int n_samples, std::string name)
{
    if (n_samples < 100) throw ContractViolation("interval_poincare_check: needs at least 100 samples");
    if (!(b > a)) throw DomainError("interval_poincare_check: empty interval");
    std::vector<double> s(static_cast<std::size_t>(n_samples) + 1), vals(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] = a + (b - a) * static_cast<double>(k) / n_samples;
        vals[k] = v(s[k]);
    }
    return interval_poincare_check(s, vals, std::move(name));
}

InequalityReport curve_poincare_check(const PlaneField& w, const Curve& curve, int n_samples, std::string name)
{
    if (n_samples < 100) throw ContractViolation("curve_poincare_check: needs at least 100 samples");
    const ArcLengthTable table(curve);
    const double L = table.total_length();
    std::vector<double> s(static_cast<std::size_t>(n_samples) + 1), vals(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] = L * static_cast<double>(k) / n_samples;
        const double t = k == 0 ? curve.t_begin() : (k + 1 == s.size() ? curve.t_end() : table.parameter_at(s[k]));
        vals[k] = w(curve.position(t));
    }
    return interval_poincare_check(s, vals, std::move(name));
}

TraceEstimate trace_poincare_estimate(const FeSpace& space, int n_random, std::uint64_t seed)
{
    if (n_random < 100) throw ContractViolation("trace_poincare_estimate: needs at least 100 random fields");
    const SparseMatrix K = restrict_to_free(space, stiffness_matrix(space));
    const SparseMatrix Mb = restrict_to_free(space, boundary_mass_matrix(space));
    TraceEstimate est;
    auto consider = [&](const Vector& v, const std::string& label) {
        const double e = v.dot(K * v);
        if (!(e > 0.0)) return false;
        const double r = std::sqrt(std::max(v.dot(Mb * v), 0.0) / e);
        if (r > est.L) {
            est.L = r;
            est.maximizer = label;
            est.field = extend_from_free(space, v);
        }
        return true;
    };
    SeededUniform rng(seed);
    for (int k = 0; k < n_random; ++k) {
        Vector v = rng.vector(space.free_count());
        if (!consider(v, "random #" + std::to_string(k))) ++est.skipped;
    }
    for (int k = 0; k < space.free_count(); ++k) {
        const double kk = K.coeff(k, k);
        const double mm = Mb.coeff(k, k);
        if (kk > 0.0 && std::sqrt(mm / kk) > est.L) {
            Vector v = Vector::Zero(space.free_count());
            v[k] = 1.0;
            consider(v, "hat node " + std::to_string(space.free_dofs[k]));
        }
    }
    if (space.free_count() > 0) {
        LDLT ldlt(K);
        if (ldlt.info() == Eigen::Success) {
            Vector x = Vector::Ones(space.free_count());
            for (int it = 0; it < 200; ++it) {
                Vector y = ldlt.solve(Mb * x);
                const double n = y.norm();
                if (!(n > 0.0)) break;
                x = y / n;
            }
            consider(x, "eigenvector");
        }
    }
    return est;
}

CounterexampleReport poincare_counterexample(double r_inner, double r_outer, int n, AnnulusNu nu_on)
{
    if (nu_on != AnnulusNu::Outer) {
        throw ContractViolation("poincare_counterexample needs the Ventcel condition on the outer circle");
    }
    auto spec = std::make_shared<const DomainSpec>(build_annulus(r_inner, r_outer, nu_on));
    const FeSpace space = build_space(triangulate(spec, n));
    Vector w(space.node_count());
    for (int i = 0; i < space.node_count(); ++i) {
        w[i] = (space.mesh->nodes[i].norm() - r_inner) / (r_outer - r_inner);
    }
    CounterexampleReport rep;
    // Edge-wise sum; w^T K w cancels catastrophically when w is nearly constant.
    double semi = 0.0;
    for (const auto& e : space.ventcel_edges) semi += (w[e.b] - w[e.a]) * (w[e.b] - w[e.a]) / e.length;
    rep.tangential_seminorm = std::sqrt(semi);
    rep.trace_l2_squared = w.dot(boundary_mass_matrix(space) * w);
    rep.expected = 2.0 * std::numbers::pi * r_outer;
    rep.relative_error = std::abs(rep.trace_l2_squared - rep.expected) / rep.expected;
    for (int d : space.ventcel_dofs) rep.max_outer_deviation = std::max(rep.max_outer_deviation, std::abs(w[d] - 1.0));
    rep.pass = rep.tangential_seminorm < 1e-10 && rep.relative_error < 1e-2;
    return rep;
}

CoercivityReport coercivity_eigencheck(const SparseMatrix& A, const SparseMatrix& G, double bound)
{
    if (A.rows() != G.rows() || A.rows() != A.cols()) throw ContractViolation("coercivity_eigencheck: sizes");
    const int n = static_cast<int>(A.rows());
    CoercivityReport rep;
    if (n == 0) return rep;
    const SparseMatrix S = SparseMatrix(0.5 * (A + SparseMatrix(A.transpose())));
    {
        LDLT g(G);
        if (!positive_definite(g)) throw ContractViolation("Gram matrix is not positive definite");
    }
    // Shift so that S - alpha G is positive definite; the eigenvalue nearest
    // alpha is then the smallest one.
    double alpha = 0.0;
    LDLT op;
    for (int k = 0; k < 80; ++k) {
        op.compute(SparseMatrix(S - alpha * G));
        if (positive_definite(op)) break;
        alpha = alpha == 0.0 ? -1.0 : 2.0 * alpha;
    }
    if (!positive_definite(op)) throw NumericalError("coercivity_eigencheck: no admissible shift", alpha);

    const int p = std::min(6, n);
    SeededUniform rng(0x5eed);
    Eigen::MatrixXd X(n, p);
    for (int j = 0; j < p; ++j) X.col(j) = rng.vector(n);
    double mu = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        Eigen::MatrixXd Y(n, p);
        for (int j = 0; j < p; ++j) Y.col(j) = op.solve(Vector(G * X.col(j)));
        const Eigen::MatrixXd SY = S * Y;
        const Eigen::MatrixXd GY = G * Y;
        Eigen::MatrixXd Sr = Y.transpose() * SY;
        Eigen::MatrixXd Gr = Y.transpose() * GY;
        Sr = 0.5 * (Sr + Sr.transpose()).eval();
        Gr = 0.5 * (Gr + Gr.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(Sr, Gr);
        if (ritz.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz step failed", 0.0);
        X = Y * ritz.eigenvectors();
        const double next = ritz.eigenvalues()[0];
        rep.iterations = it + 1;
        const Vector x = X.col(0);
        const Vector gx = G * x;
        const double resid = (S * x - next * gx).norm() / std::max(gx.norm(), 1e-300);
        const bool stalled = std::abs(next - mu) <= 1e-14 * std::max(1.0, std::abs(next));
        mu = next;
        if (resid < 1e-10 || (stalled && resid < 1e-6)) {
            rep.converged = true;
            break;
        }
    }
    rep.ritz_value = mu;
    // Bisection on positive definiteness of S - alpha G (Sylvester inertia):
    // alpha < min eigenvalue exactly when the LDL^T pivots are all positive.
    double lo = alpha, hi = mu;
    while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        LDLT probe(SparseMatrix(S - mid * G));
        (positive_definite(probe) ? lo : hi) = mid;
    }
    rep.min_quotient = lo;
    if (!std::isnan(bound)) {
        rep.certified_bound = bound - 1e-8;
        LDLT cert(SparseMatrix(S - rep.certified_bound * G));
        rep.certified = positive_definite(cert);
    }
    return rep;
}

ContinuityReport continuity_check(const SparseMatrix& A, const SparseMatrix& G, const CoefficientBounds& bounds,
                                  double L, int n_random, std::uint64_t seed, bool shifted)
{
    ContinuityReport rep;
    const double sigma = shifted && bounds.sigma0 > 0.0 ? bounds.sigma0 : 0.0;
    rep.constant = 1.0 + bounds.Lambda2 + bounds.M * L + (bounds.Lambda0 + sigma) * L * L;
    SeededUniform rng(seed);
    const int n = static_cast<int>(A.rows());
    rep.pass = true;
    for (int k = 0; k < n_random; ++k) {
        const Vector v = rng.vector(n);
        const Vector w = rng.vector(n);
        const double nv = std::sqrt(v.dot(G * v));
        const double nw = std::sqrt(w.dot(G * w));
        if (!(nv > 0.0) || !(nw > 0.0)) continue;
        const double ratio = std::abs(w.dot(A * v)) / (nv * nw);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.pairs;
    }
    rep.pass = rep.max_ratio <= rep.constant * (1.0 + kInequalitySlack);
    return rep;
}

WeakResidualReport weak_residual_check(const SolutionField& solution, const VentcelProblem& problem, int n_random,
                                       std::uint64_t seed)
{
    const FeSpace& space = *solution.space;
    const Mesh& mesh = *space.mesh;
    const Vector& u = solution.values;
    const LoadData& load = problem.load;
    const bool interior_load = !(load.f1.is_zero() && load.f2x.is_zero() && load.f2y.is_zero());
    const bool boundary_load = !(load.g1.is_zero() && load.g2.is_zero());
    const auto& tri_rule = quad::triangle3();
    const auto& line_rule = quad::gauss_legendre(3);

    // Quadrature-point data shared by all test fields.
    struct EdgePoint {
        double weight, xi, a2, da2, a0, g1, g2;
    };
    std::vector<std::vector<EdgePoint>> edge_points(space.ventcel_edges.size());
    for (std::size_t k = 0; k < space.ventcel_edges.size(); ++k) {
        const auto& e = space.ventcel_edges[k];
        const Curve& c = space.ventcel_curve(e.curve);
        for (std::size_t q = 0; q < line_rule.points.size(); ++q) {
            const double xi = line_rule.points[q];
            const double t = e.t_a + xi * (e.t_b - e.t_a);
            edge_points[k].push_back({line_rule.weights[q] * e.length, xi, problem.a2.on_curve(c, e.curve, t),
                                      problem.a2.tangential_derivative(c, e.curve, t),
                                      problem.a0.on_curve(c, e.curve, t),
                                      boundary_load ? load.g1.on_curve(c, e.curve, t) : 0.0,
                                      boundary_load ? load.g2.on_curve(c, e.curve, t) : 0.0});
        }
    }
    struct CellPoint {
        double weight;
        std::array<double, 3> lam;
        double f1;
        Vec2 f2;
    };
    std::vector<std::vector<CellPoint>> cell_points;
    if (interior_load) {
        cell_points.resize(mesh.triangles.size());
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const double area = element_data(mesh, tri).area;
            for (std::size_t q = 0; q < tri_rule.weights.size(); ++q) {
                const auto& lam = tri_rule.barycentric[q];
                const Vec2 x = lam[0] * mesh.nodes[tri[0]] + lam[1] * mesh.nodes[tri[1]] + lam[2] * mesh.nodes[tri[2]];
                cell_points[t].push_back({tri_rule.weights[q] * area, lam, load.f1.at(x),
                                          Vec2(load.f2x.at(x), load.f2y.at(x))});
            }
        }
    }

    SeededUniform rng(seed);
    WeakResidualReport rep;
    for (int k = 0; k < n_random; ++k) {
        const Vector w = random_v0_field(space, rng);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const auto d = element_data(mesh, tri);
            Vec2 du = Vec2::Zero(), dw = Vec2::Zero();
            for (int i = 0; i < 3; ++i) {
                du += u[tri[i]] * d.grad[i];
                dw += w[tri[i]] * d.grad[i];
            }
            lhs += d.area * du.dot(dw);
            if (interior_load) {
                for (const auto& cp : cell_points[t]) {
                    const double wq = cp.lam[0] * w[tri[0]] + cp.lam[1] * w[tri[1]] + cp.lam[2] * w[tri[2]];
                    rhs += cp.weight * (cp.f1 * wq - cp.f2.dot(dw));
                }
            }
        }
        for (std::size_t j = 0; j < space.ventcel_edges.size(); ++j) {
            const auto& e = space.ventcel_edges[j];
            const double us = (u[e.b] - u[e.a]) / e.length;
            const double ws = (w[e.b] - w[e.a]) / e.length;
            for (const auto& p : edge_points[j]) {
                const double uq = (1.0 - p.xi) * u[e.a] + p.xi * u[e.b];
                const double wq = (1.0 - p.xi) * w[e.a] + p.xi * w[e.b];
                lhs += p.weight * ((p.a2 * ws + wq * p.da2) * us + p.a0 * uq * wq);
                rhs += p.weight * (p.g1 * wq - p.g2 * ws);
            }
        }
        rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
        ++rep.fields;
    }
    return rep;
}

ErrorNorms solution_errors(const SolutionField& solution, const PlaneField& exact)
{
    const FeSpace& space = *solution.space;
    const Mesh& mesh = *space.mesh;
    const Vector& u = solution.values;
    const auto& rule = quad::triangle6();
    double l2 = 0.0, h1 = 0.0;
    for (const auto& tri : mesh.triangles) {
        const auto d = element_data(mesh, tri);
        Vec2 du = Vec2::Zero();
        for (int i = 0; i < 3; ++i) du += u[tri[i]] * d.grad[i];
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& lam = rule.barycentric[q];
            const Vec2 x = lam[0] * mesh.nodes[tri[0]] + lam[1] * mesh.nodes[tri[1]] + lam[2] * mesh.nodes[tri[2]];
            const double uh = lam[0] * u[tri[0]] + lam[1] * u[tri[1]] + lam[2] * u[tri[2]];
            const double w = rule.weights[q] * d.area;
            l2 += w * (exact(x) - uh) * (exact(x) - uh);
            h1 += w * (exact.grad(x) - du).squaredNorm();
        }
    }
    const auto& line = quad::gauss_legendre(5);
    double tr = 0.0, ts = 0.0;
    for (const auto& e : space.ventcel_edges) {
        const Vec2& pa = mesh.nodes[e.a];
        const Vec2& pb = mesh.nodes[e.b];
        const Vec2 dir = (pb - pa) / e.length;
        const double slope = (u[e.b] - u[e.a]) / e.length;
        for (std::size_t q = 0; q < line.points.size(); ++q) {
            const double xi = line.points[q];
            const Vec2 x = (1.0 - xi) * pa + xi * pb;
            const double w = line.weights[q] * e.length;
            const double diff = exact(x) - ((1.0 - xi) * u[e.a] + xi * u[e.b]);
            const double dd = exact.grad(x).dot(dir) - slope;
            tr += w * diff * diff;
            ts += w * dd * dd;
        }
    }
    return {std::sqrt(l2), std::sqrt(h1 + ts), std::sqrt(tr)};
}

ConvergenceReport manufactured_convergence(const VentcelProblem& problem, int n0, int levels)
{
    if (!problem.exact) throw ContractViolation("manufactured_convergence needs an exact solution");
    if (levels < 3) throw ContractViolation("manufactured_convergence needs at least 3 levels");
    if (n0 < 2) throw DomainError("manufactured_convergence: n0 must be at least 2");
    auto spec = std::make_shared<const DomainSpec>(problem.spec);
    ConvergenceReport rep;
    for (int k = 0, n = n0; k < levels; ++k, n *= 2) {
        auto space = std::make_shared<const FeSpace>(build_space(triangulate(spec, n)));
        const SolutionField sol = solve_ventcel(problem, space);
        const ErrorNorms e = solution_errors(sol, *problem.exact);
        rep.rows.push_back({n, space->mesh->h, e.l2, e.v0, e.trace});
    }
    std::vector<double> h, el2, ev0, etr;
    for (const auto& r : rep.rows) {
        h.push_back(r.h);
        el2.push_back(r.e_l2);
        ev0.push_back(r.e_v0);
        etr.push_back(r.e_trace);
    }
    rep.order_l2 = least_squares_slope(h, el2);
    rep.order_v0 = least_squares_slope(h, ev0);
    rep.order_trace = least_squares_slope(h, etr);
    rep.monotone = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        const double slack = k == 1 ? 1.05 : 1.0;
        const auto& a = rep.rows[k - 1];
        const auto& b = rep.rows[k];
        if (!(b.e_l2 < slack * a.e_l2) || !(b.e_v0 < slack * a.e_v0)) rep.monotone = false;
    }
    return rep;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report)
{
    os << "n,h,e_L2,e_V0,e_trace,order_L2,order_V0\n";
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const auto& r = report.rows[k];
        os << r.n << ',' << fmt17(r.h) << ',' << fmt17(r.e_l2) << ',' << fmt17(r.e_v0) << ',' << fmt17(r.e_trace);
        if (k == 0) {
            os << ",,\n";
            continue;
        }
        const auto& p = report.rows[k - 1];
        const double lh = std::log(p.h / r.h);
        os << ',' << fmt17(std::log(p.e_l2 / r.e_l2) / lh) << ',' << fmt17(std::log(p.e_v0 / r.e_v0) / lh) << '\n';
    }
}

IbpReport ibp_identity_check(const Curve& curve, const CoefficientField& a2, const PlaneField& u,
                             const CurveFunction& w, int panels)
{
    const auto& rule = quad::gauss_legendre(10);
    const double t0 = curve.t_begin(), t1 = curve.t_end();
    const double width = (t1 - t0) / panels;
    IbpReport rep;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double t = t0 + (p + rule.points[q]) * width;
            const Vec2 x = curve.position(t);
            const Vec2 d1 = curve.first_derivative(t);
            const double speed = d1.norm();
            const Vec2 tau = d1 / speed;
            const Vec2 left(-tau.y(), tau.x());
            const Vec2 g = u.grad(x);
            const double us = g.dot(tau);
            const double uss = tau.dot(u.hess(x) * tau) + curvature(curve, t) * g.dot(left);
            const double a = a2.on_curve(curve, 0, t);
            const double da = a2.tangential_derivative(curve, 0, t);
            const double wv = w.value(t);
            const double ws = w.derivative(t) / speed;
            const double ds = rule.weights[q] * width * speed;
            rep.lhs += ds * (a * ws + wv * da) * us;
            rep.rhs -= ds * a * wv * uss;
        }
    }
    auto boundary_term = [&](double t) {
        const Vec2 d1 = curve.first_derivative(t);
        return a2.on_curve(curve, 0, t) * w.value(t) * u.grad(curve.position(t)).dot(d1 / d1.norm());
    };
    rep.endpoint_term = boundary_term(t1) - boundary_term(t0);
    rep.difference = std::abs(rep.lhs - rep.rhs - rep.endpoint_term);
    rep.pass = rep.difference < 1e-6;
    return rep;
}

CompatibilityReport compatibility_check(const PlaneField& u, const Curve& curve, int samples)
{
    if (samples < 2) throw ContractViolation("compatibility_check: needs at least 2 samples");
    CompatibilityReport rep;
    rep.samples = samples;
    for (int k = 0; k < samples; ++k) {
        const double t = curve.t_begin() + (curve.t_end() - curve.t_begin()) * k / (samples - 1);
        const auto s = boundary_field_sample(u, curve, t);
        rep.max_u_tautau = std::max(rep.max_u_tautau, std::abs(s.u_tautau));
        rep.max_equivalence_residual = std::max(rep.max_equivalence_residual, std::abs(s.u_ss - s.u_ss_identity));
    }
    return rep;
}

}  // namespace ventcel
