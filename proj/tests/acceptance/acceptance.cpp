// Acceptance criteria 1-9, one PASS/FAIL line each. Exit status 0 iff all pass.
#include "ventcel/curve.hpp"
#include "ventcel/fem.hpp"
#include "ventcel/mesh.hpp"
#include "ventcel/solver.hpp"
#include "ventcel/verify.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

using namespace ventcel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

VentcelProblem appendix_problem()
{
    VentcelProblem p;
    p.spec = build_appendix_domain();
    p.a2 = CoefficientField::inverse_curvature();
    p.a0 = CoefficientField::constant(0.0);
    p.phi = CoefficientField::plane(exact_appendix_field(), "exact_appendix");
    p.exact = exact_appendix_field();
    return p;
}

Outcome appendix_convergence()
{
    const ConvergenceReport r = manufactured_convergence(appendix_problem(), 8, 4);
    const double finest = r.rows.back().e_l2;
    return {r.order_l2 >= 1.8 && r.order_v0 >= 0.9 && finest < 1e-3,
            "n=8..64 order_L2=" + g(r.order_l2) + " order_V0=" + g(r.order_v0) + " finest e_L2=" + g(finest)};
}

Outcome compatibility()
{
    const auto r = compatibility_check(exact_appendix_field(), appendix_curve(), 1000);
    return {r.max_u_tautau < 1e-8 && r.max_equivalence_residual < 1e-6,
            "max|u_tautau|=" + g(r.max_u_tautau) + " max residual=" + g(r.max_equivalence_residual) + " (1000 samples)"};
}

Outcome curvature_closed_form()
{
    const Curve c = appendix_curve();
    double worst = 0.0, kmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const double t = -1.0 + 2.0 * k / 999.0;
        const double rho = std::sqrt(1.0 + t * t);
        const double closed = std::pow(2.0 - rho, 5.0 / 3.0) * std::pow(1.0 + rho, 5.0 / 6.0) /
                              (std::pow(2.0, 1.5) * std::pow(rho, 2.5));
        const double kappa = curvature(c, t);
        worst = std::max(worst, std::abs(kappa - closed) / closed);
        kmin = std::min(kmin, kappa);
    }
    return {worst < 1e-10 && kmin > 0.0, "max rel err=" + g(worst) + " min kappa=" + g(kmin)};
}

Outcome coercivity()
{
    const char* sets[][2] = {{"const:1", "const:0"},
                             {"const:0.5", "const:1"},
                             {"poly:1,0.25,0,0,0,0", "const:0"},
                             {"poly:2,0.5,0,0,0,0.2", "poly:1,0,0,1,0,0"},
                             {"poly:3,0,0,0,0.5,0", "const:0.25"}};
    bool pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    int cases = 0;
    for (const char* d : {"square", "annulus", "appendix"}) {
        const FeSpace s = build_space(triangulate(parse_domain(d), 16));
        const SparseMatrix G = v0_gram(s);
        for (const auto& set : sets) {
            const FeSystem sys = assemble_bilinear(s, parse_coefficient(set[0]), parse_coefficient(set[1]),
                                                   {.apply_sigma_shift = true});
            const auto& b = sys.bounds;
            // Constant a2 (M = 0) gets the sharper bound.
            const double bound = b.M == 0.0 ? std::min(1.0, b.lambda2) : std::min(1.0, 0.5 * b.lambda2);
            const auto r = coercivity_eigencheck(sys.matrix, G, bound);
            worst_margin = std::min(worst_margin, r.min_quotient - bound);
            pass = pass && r.min_quotient >= bound - 1e-8;
            ++cases;
        }
    }
    return {pass, std::to_string(cases) + " cases, min(quotient - bound)=" + g(worst_margin)};
}

Outcome poincare_suites()
{
    bool pass = true;
    for (const auto& r : {interval_poincare_check([](double s) { return s; }, 0.0, 1.0, 1000),
                          interval_poincare_check([](double) { return 0.7; }, 0.0, 1.0, 1000),
                          interval_poincare_check([](double s) { return std::clamp(2.0 * s, 0.0, 1.0); }, 0.0, 1.0, 1000)}) {
        pass = pass && r.pass;
    }
    PlaneField y, x;
    y.value = [](const Vec2& p) { return p.y(); };
    x.value = [](const Vec2& p) { return p.x(); };
    const double pi = std::numbers::pi;
    const Curve semi("upper semicircle", 0.0, pi, [](double t) { return Vec2(std::cos(t), std::sin(t)); },
                     [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
                     [](double t) { return Vec2(-std::cos(t), -std::sin(t)); });
    pass = pass && curve_poincare_check(y, appendix_curve(), 2000).pass;
    pass = pass && curve_poincare_check(constant_field(1.0), circle_curve(1.0), 2000).pass;
    pass = pass && curve_poincare_check(x, semi, 2000).pass;
    const auto ce = poincare_counterexample(1.0, 2.0, 16);
    const double rel = std::abs(ce.trace_l2_squared - 4 * pi) / (4 * pi);
    pass = pass && ce.tangential_seminorm < 1e-10 && rel < 1e-2;
    return {pass, "6 analytic cases; counterexample |grad_tau w|=" + g(ce.tangential_seminorm) +
                      " |w|^2=" + g(ce.trace_l2_squared) + " vs 4pi (rel " + g(rel) + ")"};
}

Outcome weak_residual()
{
    const VentcelProblem p = appendix_problem();
    const SolutionField sol = solve_ventcel(p, triangulate(p.spec, 32));
    const double clean = weak_residual_check(sol, p, 100, 42).max_residual;
    SolutionField bad = sol;
    bad.values[sol.space->free_dofs[sol.space->free_count() / 2]] += 1e-3;
    const double faulty = weak_residual_check(bad, p, 100, 42).max_residual;
    return {clean < 1e-8 && faulty > 1e-6, "residual=" + g(clean) + " with fault=" + g(faulty)};
}

Outcome uniqueness()
{
    bool pass = true;
    double min_rcond = std::numeric_limits<double>::infinity(), max_zero = 0.0;
    for (const char* d : {"square", "annulus", "appendix"}) {
        auto space = std::make_shared<const FeSpace>(build_space(triangulate(parse_domain(d), 16)));
        for (double a2v : {0.1, 1.0, 10.0}) {
            for (bool perturbed : {false, true}) {
                for (double a0v : {0.0, 1.0}) {
                    const auto a2 = perturbed ? CoefficientField::polynomial({a2v, 0.2 * a2v, 0, 0, 0, 0})
                                              : CoefficientField::constant(a2v);
                    const auto rep = uniqueness_diagnostic(assemble_bilinear(*space, a2, CoefficientField::constant(a0v)));
                    min_rcond = std::min(min_rcond, rep.rcond);
                    pass = pass && !rep.singular && rep.rcond > 1e-12;
                }
            }
        }
        VentcelProblem zero;
        zero.spec = parse_domain(d);
        zero.a2 = CoefficientField::polynomial({1.0, 0.25, 0, 0, 0, 0});
        zero.a0 = CoefficientField::constant(1.0);
        max_zero = std::max(max_zero, solve_ventcel(zero, space).values.cwiseAbs().maxCoeff());
    }
    pass = pass && max_zero < 1e-14;
    return {pass, "36 systems, min rcond=" + g(min_rcond) + "; zero data max|u|=" + g(max_zero)};
}

Outcome integration_by_parts()
{
    const double pi = std::numbers::pi;
    const Curve app = appendix_curve();
    const CurveFunction bump{[](double t) { return 1.0 - t * t; }, [](double t) { return -2.0 * t; }};
    const CurveFunction wave{[pi](double t) { return std::sin(pi * t); }, [pi](double t) { return pi * std::cos(pi * t); }};
    const Curve circle = circle_curve(2.0);
    const PlaneField wf = polynomial_field({0, 1, 0, 0, 0, 1});
    const CurveFunction periodic{[circle, wf](double t) { return wf(circle.position(t)); },
                                 [circle, wf](double t) { return wf.grad(circle.position(t)).dot(circle.first_derivative(t)); }};
    const IbpReport r[] = {
        ibp_identity_check(app, CoefficientField::inverse_curvature(), exact_appendix_field(), bump),
        ibp_identity_check(app, CoefficientField::polynomial({1, 0.5, 0, 0, 0, 0}), polynomial_field({0, 0, 0, 1, 0, 1}), wave),
        ibp_identity_check(circle, CoefficientField::polynomial({2, 0.5, 0.3, 0, 0, 0}), exact_appendix_field(), periodic)};
    double worst = 0.0;
    for (const auto& x : r) worst = std::max(worst, x.difference);
    const bool closed_ok = std::abs(r[2].endpoint_term) < 1e-10;
    return {worst < 1e-6 && closed_ok,
            "3 pairs, max |lhs-rhs|=" + g(worst) + "; closed-curve endpoint term=" + g(r[2].endpoint_term)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const fs::path root = fs::temp_directory_path() / "ventcel_acceptance_determinism";
    fs::remove_all(root);
    int codes[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = root / ("run" + std::to_string(run));
        const std::string cmd = "'" VENTCEL_CLI_PATH "' verify --seed 42 --output-dir '" + dir.string() + "' > /dev/null";
        const int status = std::system(cmd.c_str());
        codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    bool same = true;
    std::size_t bytes = 0;
    for (const char* name : {"verify_report.txt", "verify_cases.csv"}) {
        const std::string a = slurp(root / "run0" / name), b = slurp(root / "run1" / name);
        same = same && !a.empty() && a == b;
        bytes += a.size();
    }
    return {same && codes[0] == 0 && codes[1] == 0,
            "exit codes " + std::to_string(codes[0]) + "," + std::to_string(codes[1]) + "; " + std::to_string(bytes) +
                " bytes " + (same ? "identical" : "DIFFER")};
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"appendix manufactured solution", appendix_convergence},
        {"compatibility identity", compatibility},
        {"curvature closed form", curvature_closed_form},
        {"coercivity", coercivity},
        {"Poincare suites", poincare_suites},
        {"weak-residual oracle", weak_residual},
        {"uniqueness sweep", uniqueness},
        {"integration-by-parts identity", integration_by_parts},
        {"determinism", determinism},
    };
    int failed = 0, index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << o.detail << '\n';
    }
    std::cout << (9 - failed) << "/9 criteria passed\n";
    return failed == 0 ? 0 : 1;
}
