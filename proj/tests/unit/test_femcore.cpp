#include "ventcel/coefficient.hpp"
#include "ventcel/error.hpp"
#include "ventcel/fem.hpp"
#include "ventcel/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

using namespace ventcel;

namespace {

const double pi = std::numbers::pi;

FeSpace space_for(const char* domain, int n)
{
    return build_space(triangulate(parse_domain(domain), n));
}

double closed_form_kappa(double t)
{
    const double rho = std::sqrt(1.0 + t * t);
    return std::pow(2.0 - rho, 5.0 / 3.0) * std::pow(1.0 + rho, 5.0 / 6.0) / (std::pow(2.0, 1.5) * std::pow(rho, 2.5));
}

int node_at(const Mesh& m, double x, double y)
{
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        if ((m.nodes[i] - Vec2(x, y)).norm() < 1e-12) return static_cast<int>(i);
    }
    return -1;
}

// Nodes on the bottom edge y = 1 of the square [0,1] x [1,2], ordered by x.
std::vector<int> bottom_nodes(const Mesh& m)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        if (std::abs(m.nodes[i].y() - 1.0) < 1e-14) out.push_back(static_cast<int>(i));
    }
    std::sort(out.begin(), out.end(), [&](int a, int b) { return m.nodes[a].x() < m.nodes[b].x(); });
    return out;
}

}  // namespace

TEST(Coefficient, ParseGrammar)
{
    EXPECT_DOUBLE_EQ(parse_coefficient("const:2.5").at(Vec2(3, 4)), 2.5);
    EXPECT_TRUE(parse_coefficient("const:0").is_zero());
    // poly: c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2
    EXPECT_DOUBLE_EQ(parse_coefficient("poly:1,2,3,4,5,6").at(Vec2(1, 2)), 1 + 2 + 6 + 4 + 10 + 24);
    EXPECT_NEAR(parse_coefficient("exact_appendix").at(Vec2(2, 1)), 8 - 6, 1e-15);
    EXPECT_THROW(parse_coefficient("poly:1,2"), DomainError);
    EXPECT_THROW(parse_coefficient("sin:1"), DomainError);
    EXPECT_THROW(parse_coefficient("nodal:/nonexistent/file.csv"), DomainError);
}

TEST(Coefficient, BoundaryOnlyFields)
{
    const CoefficientField inv = CoefficientField::inverse_curvature();
    EXPECT_FALSE(inv.defined_on_plane());
    EXPECT_THROW(inv.at(Vec2(0, 0)), ContractViolation);
    const Curve c = appendix_curve();
    EXPECT_NEAR(inv.on_curve(c, 0, 0.4), 1.0 / closed_form_kappa(0.4), 1e-12);
    // FD tangential derivative against the chain rule on the closed form.
    const double h = 1e-5;
    const double dk = (1.0 / closed_form_kappa(0.4 + h) - 1.0 / closed_form_kappa(0.4 - h)) / (2 * h);
    EXPECT_NEAR(inv.tangential_derivative(c, 0, 0.4), dk / c.speed(0.4), 1e-6);
}

TEST(Coefficient, TangentialDerivativeAnalyticMatchesFd)
{
    const CoefficientField a2 = parse_coefficient("poly:2,0.5,0,0,0,0.2");
    const Curve c = appendix_curve();
    for (double t : {-0.8, 0.0, 0.6}) {
        EXPECT_NEAR(a2.tangential_derivative(c, 0, t), a2.tangential_derivative_fd(c, 0, t), 1e-7);
    }
}

TEST(Coefficient, NodalCsv)
{
    const std::string path = ::testing::TempDir() + "ventcel_nodal.csv";
    {
        std::ofstream out(path);
        out << "curve_id,t,value\n0,-1,1\n0,0,3\n0,1,2\n";
    }
    const CoefficientField f = parse_coefficient("nodal:" + path);
    const Curve c = appendix_curve();
    EXPECT_NEAR(f.on_curve(c, 0, -0.5), 2.0, 1e-15);
    EXPECT_NEAR(f.on_curve(c, 0, 0.5), 2.5, 1e-15);
    EXPECT_NEAR(f.tangential_derivative(c, 0, 0.5), -1.0 / c.speed(0.5), 1e-12);
    std::remove(path.c_str());
}

TEST(BuildSpace, SquareCounts)
{
    const FeSpace s = space_for("square", 2);
    EXPECT_EQ(s.ventcel_dofs.size(), 2u);  // one interior node per chain
    EXPECT_EQ(s.free_count(), 3);          // plus the centre node
    EXPECT_EQ(s.dirichlet_dofs.size(), 6u);
}

TEST(BuildSpace, AnnulusClosedChain)
{
    const FeSpace s = space_for("annulus", 4);
    const Mesh& m = *s.mesh;
    for (int d : s.ventcel_dofs) EXPECT_NEAR(m.nodes[d].norm(), 2.0, 1e-12);
    for (int d : s.dirichlet_dofs) EXPECT_NEAR(m.nodes[d].norm(), 1.0, 1e-12);
    int outer = 0, inner = 0;
    for (const auto& p : m.nodes) {
        outer += std::abs(p.norm() - 2.0) < 1e-12;
        inner += std::abs(p.norm() - 1.0) < 1e-12;
    }
    EXPECT_EQ(static_cast<int>(s.ventcel_dofs.size()), outer);
    EXPECT_EQ(static_cast<int>(s.dirichlet_dofs.size()), inner);
}

TEST(BuildSpace, InvalidMeshRejected)
{
    Mesh m = triangulate(build_square(), 4);
    std::swap(m.triangles[0][1], m.triangles[0][2]);
    EXPECT_THROW(build_space(m), MeshError);
}

TEST(CoefficientBounds, Constants)
{
    const auto b = coefficient_bounds(CoefficientField::constant(1.0), CoefficientField::constant(0.0),
                                      space_for("square", 4));
    EXPECT_EQ(b.lambda2, 1.0);
    EXPECT_EQ(b.Lambda2, 1.0);
    EXPECT_EQ(b.M, 0.0);
    EXPECT_EQ(b.lambda0, 0.0);
    EXPECT_EQ(b.Lambda0, 0.0);
    EXPECT_EQ(b.sigma0, 0.0);
}

TEST(CoefficientBounds, ShiftFormula)
{
    // a2 = 1 + 2x on the horizontal edges: |da2/ds| = 2 everywhere.
    const auto b = coefficient_bounds(parse_coefficient("poly:1,2,0,0,0,0"), CoefficientField::constant(0.0),
                                      space_for("square", 8));
    EXPECT_NEAR(b.M, 2.0, 1e-14);
    EXPECT_NEAR(b.sigma0, b.M * b.M / (2 * b.lambda2) - b.lambda0, 1e-14);
    EXPECT_NEAR(b.lambda2, 1.0, 0.1);
    EXPECT_NEAR(b.sigma0, 2.0, 0.2);
}

TEST(CoefficientBounds, InverseCurvatureOracle)
{
    const auto b = coefficient_bounds(CoefficientField::inverse_curvature(), CoefficientField::constant(0.0),
                                      space_for("appendix", 16));
    double kmax = 0.0, kmin = 1e300;
    for (int k = 0; k <= 20000; ++k) {
        const double kappa = closed_form_kappa(-1.0 + k * 1e-4);
        kmax = std::max(kmax, kappa);
        kmin = std::min(kmin, kappa);
    }
    EXPECT_GE(b.lambda2, 1.0 / kmax - 1e-12);
    EXPECT_LE(b.Lambda2, 1.0 / kmin + 1e-12);
    EXPECT_NEAR(b.lambda2, 1.0 / kmax, 5e-3);
    // The outermost Gauss points stop short of t = +-1, where kappa is smallest.
    EXPECT_NEAR(b.Lambda2, 1.0 / kmin, 0.3);
    EXPECT_GT(b.sigma0, 0.0);
}

TEST(CoefficientBounds, EllipticityViolation)
{
    const FeSpace s = space_for("square", 4);
    EXPECT_THROW(coefficient_bounds(CoefficientField::constant(0.0), CoefficientField::constant(0.0), s),
                 EllipticityViolation);
    EXPECT_THROW(coefficient_bounds(CoefficientField::constant(1.0), CoefficientField::constant(-1.0), s),
                 EllipticityViolation);
    EXPECT_NO_THROW(coefficient_bounds(CoefficientField::constant(0.0), CoefficientField::constant(0.0), s, false));
}

TEST(Assembly, InteriorStiffnessStencil)
{
    // Uniform right-triangle mesh: the P1 stiffness is the 5-point stencil.
    const FeSpace s = space_for("square", 2);
    const SparseMatrix K = stiffness_matrix(s);
    const Mesh& m = *s.mesh;
    const int c = node_at(m, 0.5, 1.5);
    ASSERT_GE(c, 0);
    EXPECT_NEAR(K.coeff(c, c), 4.0, 1e-14);
    EXPECT_NEAR(K.coeff(c, node_at(m, 0.0, 1.5)), -1.0, 1e-14);
    EXPECT_NEAR(K.coeff(c, node_at(m, 0.5, 2.0)), -1.0, 1e-14);
    EXPECT_NEAR(K.coeff(c, node_at(m, 0.0, 1.0)), 0.0, 1e-14);
    EXPECT_NEAR(K.coeff(c, node_at(m, 1.0, 2.0)), 0.0, 1e-14);
    // Row sums vanish: constants are in the kernel.
    EXPECT_LT((K * Vector::Ones(K.cols())).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assembly, BoundaryBlockUnitCoefficient)
{
    const FeSpace s = space_for("square", 2);
    const SparseMatrix B = bilinear_matrix_full(s, CoefficientField::constant(1.0), CoefficientField::constant(0.0));
    const SparseMatrix D = SparseMatrix(B - stiffness_matrix(s));
    const auto bottom = bottom_nodes(*s.mesh);
    ASSERT_EQ(bottom.size(), 3u);
    const double ell = 0.5;
    EXPECT_NEAR(D.coeff(bottom[0], bottom[0]), 1.0 / ell, 1e-14);
    EXPECT_NEAR(D.coeff(bottom[0], bottom[1]), -1.0 / ell, 1e-14);
    EXPECT_NEAR(D.coeff(bottom[1], bottom[1]), 2.0 / ell, 1e-14);
    EXPECT_NEAR(D.coeff(bottom[0], bottom[2]), 0.0, 1e-14);
}

TEST(Assembly, AsymmetryMatchesMidpointOracle)
{
    // a2 = 1 + x: on the bottom edge d a2/ds = 1 along +x. The antisymmetric
    // part is int a2' (phi_j' phi_i - phi_i' phi_j).
    const int n = 4;
    const FeSpace s = space_for("square", n);
    const SparseMatrix B = bilinear_matrix_full(s, parse_coefficient("poly:1,1,0,0,0,0"), CoefficientField::constant(0.0));
    const SparseMatrix asym = SparseMatrix(B - SparseMatrix(B.transpose()));
    const auto bottom = bottom_nodes(*s.mesh);
    const auto hat = [&](int k, double x) { return std::max(0.0, 1.0 - std::abs(x * n - k)); };
    const auto dhat = [&](int k, double x) {
        const double r = x * n - k;
        if (r <= -1.0 || r >= 1.0) return 0.0;
        return r < 0.0 ? double(n) : -double(n);
    };
    const int panels = 10000;
    for (int i = 1; i + 1 < static_cast<int>(bottom.size()); ++i) {
        for (int j : {i - 1, i + 1}) {
            double oracle = 0.0;
            for (int p = 0; p < panels; ++p) {
                const double x = (p + 0.5) / panels;
                oracle += (dhat(j, x) * hat(i, x) - dhat(i, x) * hat(j, x)) / panels;
            }
            EXPECT_NEAR(asym.coeff(bottom[i], bottom[j]), oracle, 1e-10) << i << "," << j;
        }
    }
}

TEST(Assembly, ShiftAndContract)
{
    const FeSpace s = space_for("square", 4);
    const auto a2 = parse_coefficient("poly:1,0.9,0,0,0,0");
    const auto a0 = CoefficientField::constant(0.0);
    const FeSystem plain = assemble_bilinear(s, a2, a0);
    const FeSystem shifted = assemble_bilinear(s, a2, a0, {.apply_sigma_shift = true});
    EXPECT_FALSE(plain.sigma_shift_applied);
    EXPECT_TRUE(shifted.sigma_shift_applied);
    const SparseMatrix Mb = restrict_to_free(s, boundary_mass_matrix(s));
    EXPECT_LT((SparseMatrix(shifted.matrix - plain.matrix - shifted.bounds.sigma0 * Mb)).norm(), 1e-12);
    EXPECT_EQ(plain.matrix.rows(), s.free_count());
}

TEST(Load, ZeroData)
{
    const FeSpace s = space_for("appendix", 8);
    const Vector rhs = assemble_load(s, LoadData{}, CoefficientField::constant(1.0), CoefficientField::constant(0.0),
                                     Vector::Zero(s.node_count()));
    EXPECT_EQ(rhs.size(), s.free_count());
    EXPECT_EQ(rhs.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Load, ConstantSourceLumping)
{
    const FeSpace s = space_for("square", 4);
    LoadData load;
    load.f1 = CoefficientField::constant(1.0);
    const Vector L = load_vector_full(s, load);
    const Mesh& m = *s.mesh;
    std::vector<double> support(m.node_count(), 0.0);
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        for (int v : m.triangles[k]) support[v] += m.signed_area(k);
    }
    for (std::size_t i = 0; i < m.node_count(); ++i) EXPECT_NEAR(L[i], support[i] / 3.0, 1e-15);
}

TEST(Load, FluxAgainstElementOracle)
{
    const FeSpace s = space_for("appendix", 8);
    LoadData load;
    load.f2x = CoefficientField::constant(1.0);
    const Vector L = load_vector_full(s, load);
    const Mesh& m = *s.mesh;
    Vector oracle = Vector::Zero(m.node_count());
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        const auto& t = m.triangles[k];
        const Vec2 p0 = m.nodes[t[0]], p1 = m.nodes[t[1]], p2 = m.nodes[t[2]];
        const double twice = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
        // d(lambda_i)/dx = (y_j - y_k) / (2 area), cyclic.
        oracle[t[0]] -= 0.5 * (p1.y() - p2.y());
        oracle[t[1]] -= 0.5 * (p2.y() - p0.y());
        oracle[t[2]] -= 0.5 * (p0.y() - p1.y());
        (void)twice;
    }
    EXPECT_LT((L - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Norms, V0HatFunction)
{
    const int n = 4;
    const FeSpace s = space_for("square", n);
    const Mesh& m = *s.mesh;
    Vector v = Vector::Zero(s.node_count());
    const int node = node_at(m, 0.5, 1.0);
    ASSERT_GE(node, 0);
    v[node] = 1.0;
    // Interior energy 2 (half the 5-point diagonal), boundary energy 2/ell.
    EXPECT_NEAR(v0_norm(s, v), std::sqrt(2.0 + 2.0 * n), 1e-13);
    EXPECT_NEAR(v0_norm(s, 2.0 * v), 2.0 * v0_norm(s, v), 1e-13);
    EXPECT_EQ(v0_norm(s, Vector::Zero(s.node_count())), 0.0);
    v[s.dirichlet_dofs.front()] = 1.0;
    EXPECT_THROW(v0_norm(s, v), ContractViolation);
}

TEST(Norms, VNormOfOneOnAnnulus)
{
    const double exact = std::sqrt(3 * pi + 4 * pi);
    double prev = 0.0;
    for (int n : {8, 16, 32}) {
        const FeSpace s = space_for("annulus", n);
        const double err = std::abs(v_norm(s, Vector::Ones(s.node_count())) - exact);
        if (prev > 0.0) {
            EXPECT_NEAR(prev / err, 4.0, 0.4) << n;
        }
        prev = err;
    }
    EXPECT_LT(prev, 1e-2);
    const FeSpace s = space_for("annulus", 8);
    EXPECT_EQ(v_norm(s, Vector::Zero(s.node_count())), 0.0);
    Vector v = interpolate(s, polynomial_field({0, 0, 0, 1, 0, 1}));
    for (int d : s.dirichlet_dofs) v[d] = 0.0;
    EXPECT_GE(v_norm(s, v), v0_norm(s, v));
}

TEST(McShane, ConstantData)
{
    const FeSpace s = space_for("appendix", 8);
    const Vector lift = mcshane_lift(s, CoefficientField::constant(3.5));
    EXPECT_LT((lift.array() - 3.5).abs().maxCoeff(), 1e-15);
}

TEST(McShane, LinearDataIsLipschitzAndExact)
{
    const double alpha = 2.0;
    const FeSpace s = space_for("square", 8);
    const Vector lift = mcshane_lift(s, parse_coefficient("poly:0,2,0,0,0,0"), alpha);
    const Mesh& m = *s.mesh;
    for (int d : s.dirichlet_dofs) EXPECT_NEAR(lift[d], alpha * m.nodes[d].x(), 1e-15);
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            EXPECT_LE(std::abs(lift[i] - lift[j]), alpha * (m.nodes[i] - m.nodes[j]).norm() * (1 + 1e-12) + 1e-15);
        }
    }
}

TEST(McShane, AppendixBound)
{
    const FeSpace s = space_for("appendix", 16);
    const PlaneField u = exact_appendix_field();
    const CoefficientField phi = CoefficientField::plane(u, "exact_appendix");
    const Mesh& m = *s.mesh;
    double K = 0.0, diam = 0.0, phi_max = 0.0;
    for (const auto& p : m.nodes) {
        K = std::max(K, u.grad(p).norm());
        for (const auto& q : m.nodes) diam = std::max(diam, (p - q).norm());
    }
    for (const auto& sample : dirichlet_samples(s, phi)) phi_max = std::max(phi_max, std::abs(sample.value));
    const Vector lift = mcshane_lift(s, phi, K);
    EXPECT_LE(lift.cwiseAbs().maxCoeff(), phi_max + K * diam);
    for (int d : s.dirichlet_dofs) EXPECT_NEAR(lift[d], u(m.nodes[d]), 1e-13);
}
