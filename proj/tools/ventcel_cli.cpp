#include "ventcel/config.hpp"
#include "ventcel/error.hpp"
#include "ventcel/fem.hpp"
#include "ventcel/mesh.hpp"
#include "ventcel/solver.hpp"
#include "ventcel/suite.hpp"
#include "ventcel/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace ventcel;

namespace {

constexpr int kExitSuiteFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

std::string fmt17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_bounds(std::ostream& os, const CoefficientBounds& b)
{
    os << "lambda2 = " << fmt17(b.lambda2) << '\n'
       << "Lambda2 = " << fmt17(b.Lambda2) << '\n'
       << "M = " << fmt17(b.M) << '\n'
       << "lambda0 = " << fmt17(b.lambda0) << '\n'
       << "Lambda0 = " << fmt17(b.Lambda0) << '\n'
       << "sigma0 = " << fmt17(b.sigma0) << "  # M^2/(2 lambda2) - lambda0\n";
}

int run_solve(const RunConfig& c)
{
    const VentcelProblem problem = make_problem(c);
    const Mesh mesh = triangulate(problem.spec, c.n);
    const SolutionField sol = solve_ventcel(problem, mesh);
    const fs::path dir(c.output_dir);
    write_atomic(dir / "solution.csv", [&](std::ostream& os) { write_solution_csv(os, sol); });
    write_atomic(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, sol); });

    std::ostringstream diag;
    diag << "domain = " << c.domain << '\n'
         << "n = " << c.n << '\n'
         << "nodes = " << sol.space->node_count() << '\n'
         << "free_dofs = " << sol.space->free_count() << '\n'
         << "h = " << fmt17(mesh.h) << '\n'
         << "method = " << sol.stats.method << '\n'
         << "iterations = " << sol.stats.iterations << '\n'
         << "rcond = " << fmt17(sol.stats.rcond) << '\n'
         << "residual = " << fmt17(sol.residual_norm) << '\n';
    write_bounds(diag, sol.bounds);
    if (problem.exact) {
        const ErrorNorms e = solution_errors(sol, *problem.exact);
        diag << "error_L2 = " << fmt17(e.l2) << '\n'
             << "error_V0 = " << fmt17(e.v0) << '\n'
             << "error_trace = " << fmt17(e.trace) << '\n';
    }
    write_atomic(dir / "diagnostics.txt", [&](std::ostream& os) { os << diag.str(); });
    std::cout << diag.str();
    return 0;
}

int run_convergence(const RunConfig& c)
{
    const VentcelProblem problem = make_problem(c);
    const ConvergenceReport rep = manufactured_convergence(problem, c.n, c.levels);
    write_atomic(fs::path(c.output_dir) / "convergence.csv",
                 [&](std::ostream& os) { write_convergence_csv(os, rep); });
    write_convergence_csv(std::cout, rep);
    std::cout << "order_L2 = " << fmt17(rep.order_l2) << "\norder_V0 = " << fmt17(rep.order_v0)
              << "\norder_trace = " << fmt17(rep.order_trace) << '\n';
    return 0;
}

int run_verify(const RunConfig& c)
{
    const SuiteResult result = run_verification_suite(c.seed);
    std::ostringstream report;
    report << "seed = " << c.seed << '\n';
    write_suite_summary(report, result);
    for (const auto& [name, conv] : result.convergence) {
        report << "\nconvergence " << name << '\n';
        write_convergence_csv(report, conv);
    }
    const fs::path dir(c.output_dir);
    write_atomic(dir / "verify_report.txt", [&](std::ostream& os) { os << report.str(); });
    write_atomic(dir / "verify_cases.csv", [&](std::ostream& os) { write_suite_csv(os, result); });
    std::cout << report.str();
    return result.all_pass() ? 0 : kExitSuiteFailure;
}

int run_mesh(const RunConfig& c)
{
    const VentcelProblem problem = make_problem(c);
    const Mesh mesh = triangulate(problem.spec, c.n);
    if (const auto problems = validate(mesh); !problems.empty()) throw MeshError(problems.front());
    write_atomic(fs::path(c.output_dir) / "mesh.txt", [&](std::ostream& os) { write_mesh(os, mesh); });
    std::cout << "nodes = " << mesh.node_count() << "\ntriangles = " << mesh.triangles.size()
              << "\nboundary_edges = " << mesh.boundary_edges.size() << "\nh = " << fmt17(mesh.h) << '\n';
    return 0;
}

int run_info(const RunConfig& c)
{
    const VentcelProblem problem = make_problem(c);
    const FeSpace space = build_space(triangulate(problem.spec, c.n));
    // Unchecked so that a non-elliptic setup is still summarized.
    const CoefficientBounds b = coefficient_bounds(problem.a2, problem.a0, space, false);
    std::cout << "# " << space.node_count() << " nodes, " << space.free_count() << " free, "
              << space.ventcel_edges.size() << " Ventcel edges\n";
    std::ostringstream bounds;
    write_bounds(bounds, b);
    std::istringstream lines(bounds.str());
    for (std::string line; std::getline(lines, line);) std::cout << "# " << line << '\n';
    if (b.lambda2 <= 0.0 || b.lambda0 < 0.0) std::cout << "# warning: ellipticity hypotheses fail\n";
    std::cout << config_to_text(c);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ventcel boundary value problem solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> flags;
    const std::map<std::string, std::string> descriptions = {
        {"domain", "square | annulus[:R0,R1,inner|outer] | appendix"},
        {"a2", "tangential diffusion coefficient"},
        {"a0", "boundary reaction coefficient"},
        {"f1", "interior source"},
        {"f2x", "interior flux, x component"},
        {"f2y", "interior flux, y component"},
        {"g1", "boundary source"},
        {"g2", "boundary tangential flux"},
        {"phi", "Dirichlet datum"},
        {"exact", "exact solution (exact_appendix | exact_affine | exact_log_radial)"},
        {"manufactured", "derive f1 and g1 from the exact solution"},
        {"lipschitz", "Lipschitz constant of the lifting, 0 = estimate"},
        {"n", "mesh subdivision"},
        {"levels", "refinement levels for convergence"},
        {"seed", "random seed"},
        {"output_dir", "directory for output files"},
    };

    const char* commands[] = {"solve", "convergence", "verify", "mesh", "info"};
    const std::map<std::string, std::string> command_help = {
        {"solve", "solve one problem and write solution, trace and diagnostics"},
        {"convergence", "run a refinement study against the exact solution"},
        {"verify", "run the verification suite"},
        {"mesh", "write the triangulation"},
        {"info", "print coefficient bounds and echo the configuration"},
    };
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name, command_help.at(name));
        sub->add_option("--config", config_path, "key = value configuration file");
        for (const auto& key : config_keys()) {
            std::string names = "--" + key;
            if (key == "output_dir") names += ",--output-dir,-o";
            sub->add_option(names, flags[key], descriptions.at(key));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    RunConfig config;
    config.command = app.get_subcommands().front()->get_name();
    // Only flags that were actually given override the file.
    std::map<std::string, std::string> given;
    for (const auto& key : config_keys()) {
        if (app.get_subcommands().front()->count("--" + key) > 0) given[key] = flags[key];
    }

    try {
        if (!config_path.empty()) apply_config_values(config, read_config_file(config_path));
        if (const char* env = std::getenv("VENTCEL_OUTPUT_DIR"); env != nullptr && *env != '\0') {
            config.output_dir = env;
        }
        apply_config_values(config, given);
        validate_config(config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (config.command == "solve") return run_solve(config);
        if (config.command == "convergence") return run_convergence(config);
        if (config.command == "verify") return run_verify(config);
        if (config.command == "mesh") return run_mesh(config);
        return run_info(config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}
