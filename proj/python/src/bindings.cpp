#include "ventcel/config.hpp"
#include "ventcel/curve.hpp"
#include "ventcel/error.hpp"
#include "ventcel/fem.hpp"
#include "ventcel/mesh.hpp"
#include "ventcel/solver.hpp"
#include "ventcel/suite.hpp"
#include "ventcel/verify.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ventcel;

namespace {

using Matrix2 = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
using Triangles = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

// Keyword values arrive as strings so they go through the same validation as config files.
RunConfig make_config(const std::string& command, const std::map<std::string, std::string>& values)
{
    RunConfig c;
    c.command = command;
    apply_config_values(c, values);
    validate_config(c);
    return c;
}

Matrix2 node_array(const Mesh& m)
{
    Matrix2 out(m.node_count(), 2);
    for (std::size_t i = 0; i < m.node_count(); ++i) out.row(i) = m.nodes[i].transpose();
    return out;
}

Triangles triangle_array(const Mesh& m)
{
    Triangles out(m.triangles.size(), 3);
    for (std::size_t i = 0; i < m.triangles.size(); ++i)
        for (int k = 0; k < 3; ++k) out(i, k) = m.triangles[i][k];
    return out;
}

py::dict mesh_dict(const Mesh& m)
{
    py::dict d;
    d["nodes"] = node_array(m);
    d["triangles"] = triangle_array(m);
    d["h"] = m.h;
    d["area"] = mesh_area(m);
    d["min_quality"] = min_triangle_quality(m);
    return d;
}

py::dict bounds_dict(const CoefficientBounds& b)
{
    py::dict d;
    d["lambda2"] = b.lambda2;
    d["Lambda2"] = b.Lambda2;
    d["M"] = b.M;
    d["lambda0"] = b.lambda0;
    d["Lambda0"] = b.Lambda0;
    d["sigma0"] = b.sigma0;
    return d;
}

py::dict convergence_dict(const ConvergenceReport& r)
{
    py::list rows;
    for (const auto& row : r.rows) {
        py::dict d;
        d["n"] = row.n;
        d["h"] = row.h;
        d["e_l2"] = row.e_l2;
        d["e_v0"] = row.e_v0;
        d["e_trace"] = row.e_trace;
        rows.append(d);
    }
    py::dict d;
    d["rows"] = rows;
    d["order_l2"] = r.order_l2;
    d["order_v0"] = r.order_v0;
    d["order_trace"] = r.order_trace;
    d["monotone"] = r.monotone;
    return d;
}

py::dict solve(const std::map<std::string, std::string>& values)
{
    const RunConfig c = make_config("solve", values);
    const VentcelProblem p = make_problem(c);
    SolutionField sol;
    {
        py::gil_scoped_release release;
        sol = solve_ventcel(p, triangulate(p.spec, c.n));
    }
    py::dict d = mesh_dict(*sol.space->mesh);
    d["values"] = sol.values;
    d["residual"] = sol.residual_norm;
    d["method"] = sol.stats.method;
    d["iterations"] = sol.stats.iterations;
    d["rcond"] = sol.stats.rcond;
    d["bounds"] = bounds_dict(sol.bounds);
    if (p.exact) {
        const ErrorNorms e = solution_errors(sol, *p.exact);
        d["error_l2"] = e.l2;
        d["error_v0"] = e.v0;
        d["error_trace"] = e.trace;
    }
    return d;
}

py::dict convergence(const std::map<std::string, std::string>& values)
{
    const RunConfig c = make_config("convergence", values);
    const VentcelProblem p = make_problem(c);
    py::gil_scoped_release release;
    const ConvergenceReport r = manufactured_convergence(p, c.n, c.levels);
    py::gil_scoped_acquire acquire;
    return convergence_dict(r);
}

py::dict verify(std::uint64_t seed)
{
    SuiteResult r;
    {
        py::gil_scoped_release release;
        r = run_verification_suite(seed);
    }
    py::list cases;
    for (const auto& sc : r.cases) {
        py::dict d;
        d["group"] = sc.group;
        d["name"] = sc.name;
        d["value"] = sc.value;
        d["relation"] = sc.relation;
        d["threshold"] = sc.threshold;
        d["pass"] = sc.pass;
        cases.append(d);
    }
    std::ostringstream summary;
    write_suite_summary(summary, r);
    py::dict conv;
    for (const auto& [name, rep] : r.convergence) conv[py::str(name)] = convergence_dict(rep);
    py::dict d;
    d["all_pass"] = r.all_pass();
    d["cases"] = cases;
    d["convergence"] = conv;
    d["summary"] = summary.str();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "P1 finite elements for the Laplace equation with Ventcel boundary conditions";

    // Translators run newest first, so the base class goes in before its subclasses.
    py::register_exception<Error>(m, "VentcelError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<EllipticityViolation>(m, "EllipticityViolation", PyExc_ValueError);
    py::register_exception<SingularSystem>(m, "SingularSystem", PyExc_ArithmeticError);

    m.def("config_keys", &config_keys);

    m.def(
        "eval_curve",
        [](const std::string& curve, double t) {
            const Vec2 p = eval_curve(parse_curve(curve), t);
            return std::pair{p.x(), p.y()};
        },
        py::arg("curve"), py::arg("t"));
    m.def(
        "curvature", [](const std::string& curve, double t) { return curvature(parse_curve(curve), t); },
        py::arg("curve"), py::arg("t"));
    m.def(
        "arc_length", [](const std::string& curve, double t) { return arc_length(parse_curve(curve), t); },
        py::arg("curve"), py::arg("t"), "Arc length from the start of the parameter interval to t.");
    m.def(
        "curve_interval",
        [](const std::string& curve) {
            const Curve c = parse_curve(curve);
            return std::pair{c.t_begin(), c.t_end()};
        },
        py::arg("curve"));

    m.def(
        "triangulate", [](const std::string& domain, int n) { return mesh_dict(triangulate(parse_domain(domain), n)); },
        py::arg("domain"), py::arg("n"));
    m.def(
        "coefficient_bounds",
        [](const std::string& domain, const std::string& a2, const std::string& a0, int n) {
            const FeSpace s = build_space(triangulate(parse_domain(domain), n));
            return bounds_dict(coefficient_bounds(parse_coefficient(a2), parse_coefficient(a0), s));
        },
        py::arg("domain"), py::arg("a2") = "const:1", py::arg("a0") = "const:0", py::arg("n") = 16);

    m.def("solve", &solve, py::arg("values"), "Solve with config values given as a str->str mapping.");
    m.def("convergence", &convergence, py::arg("values"));
    m.def("run_verification_suite", &verify, py::arg("seed") = 42);
    m.def(
        "config_text",
        [](const std::map<std::string, std::string>& values) { return config_to_text(make_config("info", values)); },
        py::arg("values"));
}
