#include "ventcel/fem.hpp"

#include "ventcel/error.hpp"
#include "ventcel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ventcel {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int n, const Triplets& t)
{
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Gradients of the three barycentric functions and the area of a triangle.
struct ElementGeometry {
    std::array<Vec2, 3> grad;
    double area = 0.0;
};

ElementGeometry element_geometry(const Mesh& mesh, const std::array<int, 3>& tri)
{
    const Vec2& p0 = mesh.nodes[tri[0]];
    const Vec2& p1 = mesh.nodes[tri[1]];
    const Vec2& p2 = mesh.nodes[tri[2]];
    const double det = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
    ElementGeometry g;
    g.area = 0.5 * det;
    // grad lambda_i = rot90(opposite edge) / (2 area)
    g.grad[0] = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    g.grad[1] = Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    g.grad[2] = Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    return g;
}

constexpr int kBoundaryGauss = 3;

}  // namespace

const Curve& FeSpace::ventcel_curve(int id) const
{
    return mesh->domain->ventcel_curves.at(static_cast<std::size_t>(id));
}

FeSpace build_space(Mesh mesh)
{
    return build_space(std::make_shared<const Mesh>(std::move(mesh)));
}

FeSpace build_space(std::shared_ptr<const Mesh> mesh)
{
    if (!mesh) throw MeshError("build_space: null mesh");
    if (!mesh->domain) throw MeshError("build_space: mesh has no domain description");
    const auto issues = validate(*mesh);
    if (!issues.empty()) throw MeshError("build_space: invalid mesh: " + issues.front());

    const std::size_t n = mesh->node_count();
    std::vector<char> dirichlet(n, 0), ventcel(n, 0);
    FeSpace space;
    for (const auto& e : mesh->boundary_edges) {
        auto& mark = e.tag == EdgeTag::Dirichlet ? dirichlet : ventcel;
        mark[e.nodes[0]] = mark[e.nodes[1]] = 1;
        if (e.tag == EdgeTag::Ventcel) {
            VentcelEdge ve;
            ve.a = e.nodes[0];
            ve.b = e.nodes[1];
            ve.curve = e.curve;
            ve.t_a = e.t_a;
            ve.t_b = e.t_b;
            ve.length = (mesh->nodes[ve.b] - mesh->nodes[ve.a]).norm();
            space.ventcel_edges.push_back(ve);
        }
    }
    space.free_index.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (dirichlet[i]) {
            space.dirichlet_dofs.push_back(static_cast<int>(i));
            continue;
        }
        space.free_index[i] = static_cast<int>(space.free_dofs.size());
        space.free_dofs.push_back(static_cast<int>(i));
        if (ventcel[i]) space.ventcel_dofs.push_back(static_cast<int>(i));
    }
    space.mesh = std::move(mesh);
    return space;
}

CoefficientBounds coefficient_bounds(const CoefficientField& a2, const CoefficientField& a0,
                                     const FeSpace& space, bool check)
{
    if (space.ventcel_edges.empty()) throw ContractViolation("coefficient_bounds: no Ventcel edges");
    const auto& rule = quad::gauss_legendre(kBoundaryGauss);
    CoefficientBounds b;
    b.lambda2 = b.lambda0 = std::numeric_limits<double>::infinity();
    b.Lambda2 = b.Lambda0 = -std::numeric_limits<double>::infinity();
    for (const auto& e : space.ventcel_edges) {
        const Curve& c = space.ventcel_curve(e.curve);
        for (double xi : rule.points) {
            const double t = e.t_a + xi * (e.t_b - e.t_a);
            const double v2 = a2.on_curve(c, e.curve, t);
            const double d2 = a2.tangential_derivative(c, e.curve, t);
            const double v0 = a0.on_curve(c, e.curve, t);
            b.lambda2 = std::min(b.lambda2, v2);
            b.Lambda2 = std::max(b.Lambda2, v2);
            b.M = std::max(b.M, std::abs(d2));
            b.lambda0 = std::min(b.lambda0, v0);
            b.Lambda0 = std::max(b.Lambda0, v0);
        }
    }
    if (check && !(b.lambda2 > 0.0)) {
        throw EllipticityViolation("a2 must be positive on the Ventcel boundary (min " + std::to_string(b.lambda2)
                                   + ")");
    }
    if (check && b.lambda0 < 0.0) {
        throw EllipticityViolation("a0 must be non-negative on the Ventcel boundary (min "
                                   + std::to_string(b.lambda0) + ")");
    }
    b.sigma0 = b.M * b.M / (2.0 * b.lambda2) - b.lambda0;
    return b;
}

SparseMatrix stiffness_matrix(const FeSpace& space)
{
    const Mesh& mesh = *space.mesh;
    Triplets t;
    t.reserve(mesh.triangles.size() * 9);
    for (const auto& tri : mesh.triangles) {
        const auto g = element_geometry(mesh, tri);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.emplace_back(tri[i], tri[j], g.area * g.grad[i].dot(g.grad[j]));
    }
    return from_triplets(space.node_count(), t);
}

SparseMatrix mass_matrix(const FeSpace& space)
{
    const Mesh& mesh = *space.mesh;
    Triplets t;
    t.reserve(mesh.triangles.size() * 9);
    for (const auto& tri : mesh.triangles) {
        const double area = element_geometry(mesh, tri).area;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.emplace_back(tri[i], tri[j], area * (i == j ? 2.0 : 1.0) / 12.0);
    }
    return from_triplets(space.node_count(), t);
}

SparseMatrix boundary_stiffness_matrix(const FeSpace& space)
{
    Triplets t;
    for (const auto& e : space.ventcel_edges) {
        const double k = 1.0 / e.length;
        t.emplace_back(e.a, e.a, k);
        t.emplace_back(e.a, e.b, -k);
        t.emplace_back(e.b, e.a, -k);
        t.emplace_back(e.b, e.b, k);
    }
    return from_triplets(space.node_count(), t);
}

SparseMatrix boundary_mass_matrix(const FeSpace& space)
{
    Triplets t;
    for (const auto& e : space.ventcel_edges) {
        const double d = e.length / 3.0, o = e.length / 6.0;
        t.emplace_back(e.a, e.a, d);
        t.emplace_back(e.a, e.b, o);
        t.emplace_back(e.b, e.a, o);
        t.emplace_back(e.b, e.b, d);
    }
    return from_triplets(space.node_count(), t);
}

SparseMatrix bilinear_matrix_full(const FeSpace& space, const CoefficientField& a2, const CoefficientField& a0,
                                  double sigma)
{
    const Mesh& mesh = *space.mesh;
    Triplets t;
    t.reserve(mesh.triangles.size() * 9 + space.ventcel_edges.size() * 4);
    for (const auto& tri : mesh.triangles) {
        const auto g = element_geometry(mesh, tri);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.emplace_back(tri[i], tri[j], g.area * g.grad[i].dot(g.grad[j]));
    }
    const auto& rule = quad::gauss_legendre(kBoundaryGauss);
    for (const auto& e : space.ventcel_edges) {
        const Curve& c = space.ventcel_curve(e.curve);
        const std::array<int, 2> node{e.a, e.b};
        const std::array<double, 2> dn{-1.0 / e.length, 1.0 / e.length};
        double local[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [test][trial]
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double xi = rule.points[q];
            const double w = rule.weights[q] * e.length;
            const double t_q = e.t_a + xi * (e.t_b - e.t_a);
            const double va2 = a2.on_curve(c, e.curve, t_q);
            const double da2 = a2.tangential_derivative(c, e.curve, t_q);
            const double va0 = a0.on_curve(c, e.curve, t_q) + sigma;
            const std::array<double, 2> n{1.0 - xi, xi};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    local[i][j] += w * (va2 * dn[j] * dn[i] + da2 * dn[j] * n[i] + va0 * n[j] * n[i]);
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t.emplace_back(node[i], node[j], local[i][j]);
    }
    return from_triplets(space.node_count(), t);
}

SparseMatrix restrict_to_free(const FeSpace& space, const SparseMatrix& full)
{
    Triplets t;
    t.reserve(static_cast<std::size_t>(full.nonZeros()));
    for (int col = 0; col < full.outerSize(); ++col) {
        const int jc = space.free_index[col];
        if (jc < 0) continue;
        for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
            const int ir = space.free_index[it.row()];
            if (ir >= 0) t.emplace_back(ir, jc, it.value());
        }
    }
    return from_triplets(space.free_count(), t);
}

Vector restrict_to_free(const FeSpace& space, const Vector& full)
{
    Vector out(space.free_count());
    for (int k = 0; k < space.free_count(); ++k) out[k] = full[space.free_dofs[k]];
    return out;
}

Vector extend_from_free(const FeSpace& space, const Vector& free)
{
    Vector out = Vector::Zero(space.node_count());
    for (int k = 0; k < space.free_count(); ++k) out[space.free_dofs[k]] = free[k];
    return out;
}

FeSystem assemble_bilinear(const FeSpace& space, const CoefficientField& a2, const CoefficientField& a0,
                           AssemblyOptions options)
{
    FeSystem sys;
    sys.bounds = coefficient_bounds(a2, a0, space, options.check_ellipticity);
    sys.sigma_shift_applied = options.apply_sigma_shift && sys.bounds.sigma0 > 0.0;
    const double sigma = sys.sigma_shift_applied ? sys.bounds.sigma0 : 0.0;
    sys.matrix = restrict_to_free(space, bilinear_matrix_full(space, a2, a0, sigma));
    return sys;
}

Vector load_vector_full(const FeSpace& space, const LoadData& load)
{
    const Mesh& mesh = *space.mesh;
    Vector rhs = Vector::Zero(space.node_count());
    const bool interior = !(load.f1.is_zero() && load.f2x.is_zero() && load.f2y.is_zero());
    if (interior) {
        const auto& rule = quad::triangle3();
        for (const auto& tri : mesh.triangles) {
            const auto g = element_geometry(mesh, tri);
            for (std::size_t q = 0; q < rule.weights.size(); ++q) {
                const auto& lam = rule.barycentric[q];
                const Vec2 x = lam[0] * mesh.nodes[tri[0]] + lam[1] * mesh.nodes[tri[1]] + lam[2] * mesh.nodes[tri[2]];
                const double w = rule.weights[q] * g.area;
                const double f1 = load.f1.at(x);
                const Vec2 f2(load.f2x.at(x), load.f2y.at(x));
                for (int i = 0; i < 3; ++i) rhs[tri[i]] += w * (f1 * lam[i] - f2.dot(g.grad[i]));
            }
        }
    }
    if (!(load.g1.is_zero() && load.g2.is_zero())) {
        const auto& rule = quad::gauss_legendre(kBoundaryGauss);
        for (const auto& e : space.ventcel_edges) {
            const Curve& c = space.ventcel_curve(e.curve);
            const std::array<int, 2> node{e.a, e.b};
            const std::array<double, 2> dn{-1.0 / e.length, 1.0 / e.length};
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                const double xi = rule.points[q];
                const double w = rule.weights[q] * e.length;
                const double t_q = e.t_a + xi * (e.t_b - e.t_a);
                const double g1 = load.g1.on_curve(c, e.curve, t_q);
                const double g2 = load.g2.on_curve(c, e.curve, t_q);
                const std::array<double, 2> n{1.0 - xi, xi};
                for (int i = 0; i < 2; ++i) rhs[node[i]] += w * (g1 * n[i] - g2 * dn[i]);
            }
        }
    }
    return rhs;
}

Vector assemble_load(const FeSpace& space, const LoadData& load, const CoefficientField& a2,
                     const CoefficientField& a0, const Vector& lifting)
{
    if (lifting.size() != space.node_count()) {
        throw ContractViolation("assemble_load: lifting has wrong size");
    }
    Vector full = load_vector_full(space, load);
    if (lifting.cwiseAbs().maxCoeff() > 0.0) full -= bilinear_matrix_full(space, a2, a0) * lifting;
    return restrict_to_free(space, full);
}

SparseMatrix v0_gram(const FeSpace& space)
{
    SparseMatrix g = stiffness_matrix(space) + boundary_stiffness_matrix(space);
    return restrict_to_free(space, g);
}

double v0_norm(const FeSpace& space, const Vector& v)
{
    if (v.size() != space.node_count()) throw ContractViolation("v0_norm: wrong vector size");
    for (int d : space.dirichlet_dofs) {
        if (v[d] != 0.0) throw ContractViolation("v0_norm: field is non-zero on Dirichlet node " + std::to_string(d));
    }
    const double e = v.dot(stiffness_matrix(space) * v) + v.dot(boundary_stiffness_matrix(space) * v);
    return std::sqrt(std::max(e, 0.0));
}

double v_norm(const FeSpace& space, const Vector& v)
{
    if (v.size() != space.node_count()) throw ContractViolation("v_norm: wrong vector size");
    const SparseMatrix g = stiffness_matrix(space) + mass_matrix(space) + boundary_stiffness_matrix(space)
                           + boundary_mass_matrix(space);
    return std::sqrt(std::max(v.dot(g * v), 0.0));
}

Vector interpolate(const FeSpace& space, const PlaneField& field)
{
    Vector out(space.node_count());
    for (int i = 0; i < space.node_count(); ++i) out[i] = field(space.mesh->nodes[i]);
    return out;
}

std::vector<BoundarySample> dirichlet_samples(const FeSpace& space, const CoefficientField& phi,
                                              double spacing_factor)
{
    const Mesh& mesh = *space.mesh;
    const double spacing = std::max(mesh.h * spacing_factor, 1e-12);
    std::vector<BoundarySample> out;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != EdgeTag::Dirichlet) continue;
        const Vec2& pa = mesh.nodes[e.nodes[0]];
        const Vec2& pb = mesh.nodes[e.nodes[1]];
        const Curve* c = e.curve >= 0 ? &mesh.domain->dirichlet_pieces.at(static_cast<std::size_t>(e.curve)) : nullptr;
        auto value = [&](double s, const Vec2& p) {
            return c ? phi.on_curve(*c, e.curve, e.t_a + s * (e.t_b - e.t_a)) : phi.at(p);
        };
        const int m = std::max(1, static_cast<int>(std::ceil((pb - pa).norm() / spacing)));
        for (int k = 0; k <= m; ++k) {
            const double s = static_cast<double>(k) / m;
            Vec2 p;
            int node = -1;
            if (k == 0) {
                p = pa;
                node = e.nodes[0];
            } else if (k == m) {
                p = pb;
                node = e.nodes[1];
            } else {
                p = c ? c->position(e.t_a + s * (e.t_b - e.t_a)) : Vec2((1.0 - s) * pa + s * pb);
            }
            out.push_back({p, value(s, p), node});
        }
    }
    if (out.empty()) throw DomainError("Dirichlet boundary has no sample points");
    return out;
}

double lipschitz_estimate(const std::vector<BoundarySample>& samples)
{
    double k = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            const double d = (samples[i].point - samples[j].point).norm();
            if (d > 1e-12) k = std::max(k, std::abs(samples[i].value - samples[j].value) / d);
        }
    }
    return k;
}

Vector mcshane_lift(const FeSpace& space, const CoefficientField& phi, double K, double spacing_factor)
{
    if (!(K >= 0.0)) throw ContractViolation("mcshane_lift: Lipschitz constant must be non-negative");
    const auto samples = dirichlet_samples(space, phi, spacing_factor);
    const Mesh& mesh = *space.mesh;
    Vector out(space.node_count());
    for (int i = 0; i < space.node_count(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) best = std::min(best, s.value + K * (mesh.nodes[i] - s.point).norm());
        out[i] = best;
    }
    // Exact data at Dirichlet nodes: the first sample at the node wins.
    std::vector<char> done(space.node_count(), 0);
    for (const auto& s : samples) {
        if (s.node < 0 || done[s.node]) continue;
        out[s.node] = s.value;
        done[s.node] = 1;
    }
    return out;
}

Vector mcshane_lift(const FeSpace& space, const CoefficientField& phi)
{
    return mcshane_lift(space, phi, lipschitz_estimate(dirichlet_samples(space, phi)));
}

}  // namespace ventcel
