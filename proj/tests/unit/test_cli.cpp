#include "ventcel/config.hpp"
#include "ventcel/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace ventcel;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI in a fresh directory; stdout and stderr are captured to files.
CliRun run_cli(const std::string& args, const fs::path& dir, const std::string& env = "")
{
    fs::create_directories(dir);
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" VENTCEL_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(dir / "stdout.txt");
    r.err = read_file(dir / "stderr.txt");
    return r;
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::path(::testing::TempDir()) / ("ventcel_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string expect_config_error(const std::string& text)
{
    try {
        RunConfig c;
        apply_config_values(c, parse_config_text(text));
        validate_config(c);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

}  // namespace

TEST(ConfigText, CommentsAndWhitespace)
{
    const auto kv = parse_config_text("# header\n\n  domain = square   # trailing\nn=8\n");
    ASSERT_EQ(kv.size(), 2u);
    EXPECT_EQ(kv.at("domain"), "square");
    EXPECT_EQ(kv.at("n"), "8");
}

TEST(ConfigText, ErrorsNameTheKey)
{
    EXPECT_EQ(expect_config_error("bogus = 1\n"), "bogus");
    EXPECT_EQ(expect_config_error("n = 8\njust words\n"), "line 2");
    EXPECT_EQ(expect_config_error("n = eight\n"), "n");
    EXPECT_EQ(expect_config_error("n = 1\n"), "n");
    EXPECT_EQ(expect_config_error("seed = -3\n"), "seed");
    EXPECT_EQ(expect_config_error("lipschitz = -1\n"), "lipschitz");
    EXPECT_EQ(expect_config_error("manufactured = maybe\n"), "manufactured");
    EXPECT_EQ(expect_config_error("domain = hexagon\n"), "domain");
    EXPECT_EQ(expect_config_error("a2 = sin:1\n"), "a2");
    EXPECT_EQ(expect_config_error("exact = exact_nonsense\n"), "exact");
    EXPECT_EQ(expect_config_error("manufactured = true\n"), "manufactured");
    EXPECT_EQ(expect_config_error("n = 8\n"), "<none>");
}

TEST(ConfigValidation, ConvergenceNeedsLevelsAndExact)
{
    RunConfig c;
    c.command = "convergence";
    c.exact = "exact_appendix";
    c.levels = 2;
    EXPECT_THROW(validate_config(c), ConfigError);
    c.levels = 3;
    EXPECT_NO_THROW(validate_config(c));
    c.exact.clear();
    EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ConfigText, RoundTrip)
{
    RunConfig c;
    c.domain = "annulus:1,3,inner";
    c.a2 = "poly:1,0.25,0,0,0,0";
    c.a0 = "const:0.5";
    c.phi = "exact_log_radial";
    c.exact = "exact_log_radial";
    c.manufactured = true;
    c.lipschitz = 0.1;
    c.n = 12;
    c.levels = 5;
    c.seed = 12345678901ULL;
    c.output_dir = "runs/a";
    RunConfig back;
    apply_config_values(back, parse_config_text(config_to_text(c)));
    EXPECT_EQ(back, c);
    RunConfig defaults;
    RunConfig back2;
    apply_config_values(back2, parse_config_text(config_to_text(defaults)));
    EXPECT_EQ(back2, defaults);
}

TEST(MakeProblem, ManufacturedReplacesSources)
{
    RunConfig c;
    c.domain = "annulus";
    c.a0 = "const:1";
    c.exact = "exact_log_radial";
    c.manufactured = true;
    const VentcelProblem p = make_problem(c);
    ASSERT_TRUE(p.exact.has_value());
    EXPECT_FALSE(p.load.g1.is_zero());
    c.manufactured = false;
    EXPECT_TRUE(make_problem(c).load.g1.is_zero());
}

TEST(Cli, SolveAppendixExample)
{
    const fs::path dir = scratch("solve");
    const CliRun r = run_cli("solve --domain appendix --a2 inv_curvature --a0 const:0 --phi exact_appendix --n 32 "
                          "--exact exact_appendix --output-dir out",
                          dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "out" / "solution.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "trace.csv"));
    const std::string diag = read_file(dir / "out" / "diagnostics.txt");
    const auto pos = diag.find("residual = ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(diag.substr(pos + 11)), 1e-10);
    EXPECT_NE(diag.find("error_L2 = "), std::string::npos);
    for (const auto& entry : fs::directory_iterator(dir / "out")) EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Cli, InfoPrintsBoundsAndEchoesConfig)
{
    const fs::path dir = scratch("info");
    const CliRun r = run_cli("info --domain appendix --a2 inv_curvature", dir);
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* key : {"lambda2 = ", "Lambda2 = ", "M = ", "lambda0 = ", "Lambda0 = ", "sigma0 = "}) {
        EXPECT_NE(r.out.find(key), std::string::npos) << key;
    }
    // The non-comment lines form a config that parses back to the same settings.
    RunConfig expected;
    expected.command = "info";
    expected.a2 = "inv_curvature";
    RunConfig echoed;
    echoed.command = "info";
    apply_config_values(echoed, parse_config_text(r.out));
    EXPECT_EQ(echoed, expected);
}

TEST(Cli, ExitCodes)
{
    const fs::path dir = scratch("exit");
    CliRun r = run_cli("solve --n abc", dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'n'"), std::string::npos) << r.err;
    r = run_cli("solve --a2 sin:1", dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("'a2'"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli("solve --no-such-flag 1", dir).code, 2);
    EXPECT_EQ(run_cli("", dir).code, 2);
    r = run_cli("solve --domain square --a2 const:-1", dir);
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("a2"), std::string::npos);
}

TEST(Cli, ConfigFileEnvAndFlagPrecedence)
{
    const fs::path dir = scratch("precedence");
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "# mesh run\ndomain = square\nn = 4\noutput_dir = from_file\n";
    }
    CliRun r = run_cli("mesh --config run.cfg", dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "from_file" / "mesh.txt"));
    EXPECT_NE(r.out.find("nodes = 25"), std::string::npos) << r.out;

    r = run_cli("mesh --config run.cfg", dir, "VENTCEL_OUTPUT_DIR=from_env");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "from_env" / "mesh.txt"));

    r = run_cli("mesh --config run.cfg --n 2 -o from_flag", dir, "VENTCEL_OUTPUT_DIR=from_env");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "from_flag" / "mesh.txt"));
    EXPECT_NE(r.out.find("nodes = 9"), std::string::npos) << r.out;

    {
        std::ofstream bad(dir / "bad.cfg");
        bad << "n = 4\nfrobnicate = yes\n";
    }
    r = run_cli("mesh --config bad.cfg", dir);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("frobnicate"), std::string::npos);
}

TEST(Cli, ConvergenceWritesCsv)
{
    const fs::path dir = scratch("convergence");
    const CliRun r = run_cli("convergence --domain annulus --a0 const:1 --exact exact_log_radial --phi exact_log_radial "
                          "--manufactured true --n 4 --levels 3",
                          dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = read_file(dir / "convergence.csv");
    EXPECT_EQ(csv.rfind("n,h,e_L2,e_V0,e_trace,order_L2,order_V0\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
