#include "ventcel/suite.hpp"

#include "ventcel/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace ventcel {

namespace {

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Recorder {
public:
    explicit Recorder(SuiteResult& out) : out_(out) {}

    void check(const std::string& group, const std::string& name, double value, const std::string& rel,
               double threshold)
    {
        bool pass = false;
        if (rel == "<") pass = value < threshold;
        else if (rel == "<=") pass = value <= threshold;
        else if (rel == ">") pass = value > threshold;
        else if (rel == ">=") pass = value >= threshold;
        out_.cases.push_back({group, name, value, rel, threshold, pass});
    }

private:
    SuiteResult& out_;
};

// Coefficient sets for the form checks; all positive on every supported domain.
struct CoefficientSet {
    const char* a2;
    const char* a0;
};
constexpr CoefficientSet kCoefficientSets[] = {
    {"const:1", "const:0"},
    {"const:0.5", "const:1"},
    {"poly:1,0.25,0,0,0,0", "const:0"},
    {"poly:2,0.5,0,0,0,0.2", "poly:1,0,0,1,0,0"},
    {"poly:3,0,0,0,0.5,0", "const:0.25"},
};

constexpr const char* kDomains[] = {"square", "annulus", "appendix"};

Curve upper_semicircle()
{
    return Curve(
        "upper unit semicircle", 0.0, std::numbers::pi, [](double t) { return Vec2(std::cos(t), std::sin(t)); },
        [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
        [](double t) { return Vec2(-std::cos(t), -std::sin(t)); });
}

double closed_form_curvature(double t)
{
    const double rho = std::sqrt(1.0 + t * t);
    return std::pow(2.0 - rho, 5.0 / 3.0) * std::pow(1.0 + rho, 5.0 / 6.0) / (std::pow(2.0, 1.5) * std::pow(rho, 2.5));
}

void curve_checks(Recorder& rec)
{
    const Curve c = appendix_curve();
    double max_rel = 0.0, min_kappa = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const double t = -1.0 + 2.0 * k / 999.0;
        const double kappa = curvature(c, t);
        max_rel = std::max(max_rel, std::abs(kappa - closed_form_curvature(t)) / closed_form_curvature(t));
        min_kappa = std::min(min_kappa, kappa);
    }
    rec.check("curve", "curvature closed form max relative error", max_rel, "<", 1e-10);
    rec.check("curve", "min curvature on appendix curve", min_kappa, ">", 0.0);
    const auto comp = compatibility_check(exact_appendix_field(), c, 1000);
    rec.check("curve", "max |u_tautau| of x^3-3xy^2", comp.max_u_tautau, "<", 1e-8);
    rec.check("curve", "max equivalence residual", comp.max_equivalence_residual, "<", 1e-6);
}

void poincare_checks(Recorder& rec)
{
    const auto r1 = interval_poincare_check([](double s) { return s; }, 0.0, 1.0, 1000, "v = s");
    const auto r2 = interval_poincare_check([](double) { return 0.7; }, 0.0, 1.0, 1000, "v constant");
    const auto r3 =
        interval_poincare_check([](double s) { return std::clamp(2.0 * s, 0.0, 1.0); }, 0.0, 1.0, 1000, "clamp");
    for (const auto* r : {&r1, &r2, &r3}) rec.check("poincare", "interval " + r->name + " lhs - rhs", r->lhs - r->rhs * (1 + 1e-8), "<=", 0.0);
    rec.check("poincare", "interval v = s lhs vs 1/3", std::abs(r1.lhs - 1.0 / 3.0), "<", 1e-6);
    rec.check("poincare", "interval clamp rhs vs 1/2", std::abs(r3.rhs - 0.5), "<", 1e-12);

    PlaneField y;
    y.value = [](const Vec2& p) { return p.y(); };
    PlaneField x;
    x.value = [](const Vec2& p) { return p.x(); };
    const auto c1 = curve_poincare_check(y, appendix_curve(), 2000, "w = y on appendix curve");
    const auto c2 = curve_poincare_check(constant_field(2.0), circle_curve(1.0), 2000, "constant on unit circle");
    const auto c3 = curve_poincare_check(x, upper_semicircle(), 2000, "w = x on upper semicircle");
    for (const auto* r : {&c1, &c2, &c3}) rec.check("poincare", "curve " + r->name + " lhs - rhs", r->lhs - r->rhs * (1 + 1e-8), "<=", 0.0);
    const double pi = std::numbers::pi;
    rec.check("poincare", "semicircle lhs vs 3 pi / 2", std::abs(c3.lhs - 1.5 * pi) / (1.5 * pi), "<", 1e-5);

    const auto ce = poincare_counterexample(1.0, 2.0, 16);
    rec.check("poincare", "counterexample tangential seminorm", ce.tangential_seminorm, "<", 1e-10);
    rec.check("poincare", "counterexample |w|^2 relative error vs 4 pi", ce.relative_error, "<", 1e-2);
}

void form_checks(Recorder& rec, std::uint64_t seed)
{
    for (const char* d : kDomains) {
        auto spec = std::make_shared<const DomainSpec>(parse_domain(d));
        const FeSpace space = build_space(triangulate(spec, 16));
        const SparseMatrix G = v0_gram(space);
        const TraceEstimate L = trace_poincare_estimate(space, 100, seed);
        rec.check("trace", std::string(d) + " L_est", L.L, "<", 1e6);
        for (const auto& set : kCoefficientSets) {
            const auto a2 = parse_coefficient(set.a2);
            const auto a0 = parse_coefficient(set.a0);
            const std::string tag = std::string(d) + " a2=" + set.a2 + " a0=" + set.a0;
            const FeSystem shifted = assemble_bilinear(space, a2, a0, {.apply_sigma_shift = true});
            const auto& b = shifted.bounds;
            const double bound = b.M == 0.0 ? std::min(1.0, b.lambda2) : std::min(1.0, 0.5 * b.lambda2);
            const auto coer = coercivity_eigencheck(shifted.matrix, G, bound);
            rec.check("coercivity", tag + " min quotient - bound", coer.min_quotient - bound, ">=", -1e-8);
            rec.check("coercivity", tag + " certified", coer.certified ? 1.0 : 0.0, ">=", 1.0);
            const FeSystem plain = assemble_bilinear(space, a2, a0);
            const auto cont = continuity_check(plain.matrix, G, b, L.L, 100, seed + 1);
            rec.check("continuity", tag + " max ratio / constant", cont.max_ratio / cont.constant, "<=", 1.0 + 1e-8);
        }
    }
}

void uniqueness_checks(Recorder& rec)
{
    for (const char* d : kDomains) {
        auto spec = std::make_shared<const DomainSpec>(parse_domain(d));
        auto space = std::make_shared<const FeSpace>(build_space(triangulate(spec, 16)));
        double min_rcond = std::numeric_limits<double>::infinity();
        for (double a2v : {0.1, 1.0, 10.0}) {
            for (bool perturbed : {false, true}) {
                for (double a0v : {0.0, 1.0}) {
                    const auto a2 = perturbed ? CoefficientField::polynomial({a2v, 0.2 * a2v, 0.0, 0.0, 0.0, 0.0})
                                              : CoefficientField::constant(a2v);
                    const auto a0 = CoefficientField::constant(a0v);
                    const auto rep = uniqueness_diagnostic(assemble_bilinear(*space, a2, a0));
                    min_rcond = std::min(min_rcond, rep.rcond);
                }
            }
        }
        rec.check("uniqueness", std::string(d) + " min rcond over sweep", min_rcond, ">", 1e-12);
        VentcelProblem zero;
        zero.spec = *spec;
        zero.a2 = CoefficientField::polynomial({1.0, 0.25, 0.0, 0.0, 0.0, 0.0});
        zero.a0 = CoefficientField::constant(1.0);
        const auto sol = solve_ventcel(zero, space);
        rec.check("uniqueness", std::string(d) + " zero data max |u|", sol.values.cwiseAbs().maxCoeff(), "<", 1e-14);
    }
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

void solution_checks(Recorder& rec, SuiteResult& out, std::uint64_t seed)
{
    const VentcelProblem app = appendix_problem();
    const auto sol = solve_ventcel(app, triangulate(app.spec, 32));
    rec.check("solve", "appendix n=32 relative residual", sol.residual_norm, "<", 1e-10);
    rec.check("weak", "appendix weak residual (100 fields)", weak_residual_check(sol, app, 100, seed).max_residual,
              "<", 1e-8);
    SolutionField bad = sol;
    bad.values[sol.space->free_dofs[sol.space->free_count() / 2]] += 1e-3;
    rec.check("weak", "fault injection detected", weak_residual_check(bad, app, 100, seed).max_residual, ">", 1e-6);

    const auto conv = manufactured_convergence(app, 8, 4);
    out.convergence.emplace_back("appendix", conv);
    rec.check("convergence", "appendix L2 order", conv.order_l2, ">=", 1.8);
    rec.check("convergence", "appendix V0 order", conv.order_v0, ">=", 0.9);
    rec.check("convergence", "appendix finest L2 error", conv.rows.back().e_l2, "<", 1e-3);
    rec.check("convergence", "appendix monotone", conv.monotone ? 1.0 : 0.0, ">=", 1.0);

    VentcelProblem affine;
    affine.spec = build_square();
    affine.a2 = CoefficientField::constant(1.0);
    affine.a0 = CoefficientField::constant(1.0);
    affine.exact = exact_affine_field();
    affine.phi = CoefficientField::plane(exact_affine_field(), "exact_affine");
    affine.load = manufactured_load(*affine.exact, affine.a2, affine.a0);
    const auto ca = manufactured_convergence(affine, 4, 3);
    out.convergence.emplace_back("square-affine", ca);
    double worst = 0.0;
    for (const auto& r : ca.rows) worst = std::max({worst, r.e_l2, r.e_v0, r.e_trace});
    rec.check("convergence", "square affine max error", worst, "<", 1e-10);

    VentcelProblem radial;
    radial.spec = build_annulus(1.0, 2.0, AnnulusNu::Outer);
    radial.a2 = CoefficientField::constant(1.0);
    radial.a0 = CoefficientField::constant(1.0);
    radial.exact = exact_log_radial_field();
    radial.phi = CoefficientField::plane(exact_log_radial_field(), "exact_log_radial");
    radial.load = manufactured_load(*radial.exact, radial.a2, radial.a0);
    const auto cr = manufactured_convergence(radial, 8, 3);
    out.convergence.emplace_back("annulus-log-radial", cr);
    rec.check("convergence", "annulus log radial L2 order", cr.order_l2, ">=", 1.8);

    // Shift neutrality on a form with sigma0 > 0.
    auto spec = std::make_shared<const DomainSpec>(build_square());
    const FeSpace space = build_space(triangulate(spec, 16));
    const auto a2 = CoefficientField::polynomial({1.0, 0.9, 0.0, 0.0, 0.0, 0.0});
    const auto a0 = CoefficientField::constant(0.0);
    LoadData load;
    load.f1 = CoefficientField::constant(1.0);
    const Vector rhs = assemble_load(space, load, a2, a0, Vector::Zero(space.node_count()));
    const Vector direct = solve_linear(assemble_bilinear(space, a2, a0).matrix, rhs);
    const auto shifted = shift_corrected_solve(space, a2, a0, rhs);
    rec.check("solve", "shift neutrality relative difference", (shifted.solution - direct).norm() / direct.norm(),
              "<", 1e-9);
}

void ibp_checks(Recorder& rec)
{
    const Curve app = appendix_curve();
    const CurveFunction bump{[](double t) { return 1.0 - t * t; }, [](double t) { return -2.0 * t; }};
    const double pi = std::numbers::pi;
    const CurveFunction wave{[pi](double t) { return std::sin(pi * t); },
                             [pi](double t) { return pi * std::cos(pi * t); }};
    const auto r1 = ibp_identity_check(app, CoefficientField::inverse_curvature(), exact_appendix_field(), bump);
    rec.check("ibp", "appendix a2=1/kappa u=x^3-3xy^2 w=1-t^2", r1.difference, "<", 1e-6);
    const auto r2 = ibp_identity_check(app, CoefficientField::polynomial({1.0, 0.5, 0.0, 0.0, 0.0, 0.0}),
                                       polynomial_field({0.0, 0.0, 0.0, 1.0, 0.0, 1.0}), wave);
    rec.check("ibp", "appendix a2=1+x/2 u=x^2+y^2 w=sin(pi t)", r2.difference, "<", 1e-6);
    const Curve circle = circle_curve(2.0);
    const PlaneField wf = polynomial_field({0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
    const CurveFunction periodic{[circle, wf](double t) { return wf(circle.position(t)); },
                                 [circle, wf](double t) { return wf.grad(circle.position(t)).dot(circle.first_derivative(t)); }};
    const auto r3 = ibp_identity_check(circle, CoefficientField::polynomial({2.0, 0.5, 0.3, 0.0, 0.0, 0.0}),
                                       exact_appendix_field(), periodic);
    rec.check("ibp", "annulus circle R=2 (closed) w=x+y^2", r3.difference, "<", 1e-6);
}

}  // namespace

bool SuiteResult::all_pass() const
{
    for (const auto& c : cases) {
        if (!c.pass) return false;
    }
    return true;
}

SuiteResult run_verification_suite(std::uint64_t seed)
{
    SuiteResult out;
    Recorder rec(out);
    curve_checks(rec);
    poincare_checks(rec);
    form_checks(rec, seed);
    uniqueness_checks(rec);
    solution_checks(rec, out, seed);
    ibp_checks(rec);
    return out;
}

void write_suite_summary(std::ostream& os, const SuiteResult& result)
{
    int passed = 0;
    for (const auto& c : result.cases) {
        os << (c.pass ? "PASS " : "FAIL ") << c.group << '/' << c.name << ": " << fmt17(c.value) << ' ' << c.relation
           << ' ' << fmt17(c.threshold) << '\n';
        passed += c.pass ? 1 : 0;
    }
    os << passed << '/' << result.cases.size() << " checks passed\n";
}

void write_suite_csv(std::ostream& os, const SuiteResult& result)
{
    os << "group,name,value,relation,threshold,pass\n";
    for (const auto& c : result.cases) {
        os << c.group << ",\"" << c.name << "\"," << fmt17(c.value) << ',' << c.relation << ',' << fmt17(c.threshold)
           << ',' << (c.pass ? 1 : 0) << '\n';
    }
}

}  // namespace ventcel
