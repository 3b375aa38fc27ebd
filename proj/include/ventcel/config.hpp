#pragma once

#include "ventcel/solver.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ventcel {

/// Settings shared by all CLI subcommands. Coefficients use the
/// parse_coefficient grammar.
struct RunConfig {
    std::string command = "solve";
    std::string domain = "appendix";
    std::string a2 = "const:1";
    std::string a0 = "const:0";
    std::string f1 = "const:0";
    std::string f2x = "const:0";
    std::string f2y = "const:0";
    std::string g1 = "const:0";
    std::string g2 = "const:0";
    std::string phi = "const:0";
    std::string exact;          ///< exact-field name, empty for none
    bool manufactured = false;  ///< derive f1 and g1 from `exact`
    double lipschitz = 0.0;     ///< McShane constant, 0 = estimate
    int n = 16;
    int levels = 4;
    std::uint64_t seed = 42;
    std::string output_dir = ".";

    bool operator==(const RunConfig&) const = default;
};

/// Keys accepted in config files and as --<key> flags.
const std::vector<std::string>& config_keys();

/// "key = value" lines, '#' starts a comment. ConfigError names the
/// offending key (or "line N" for malformed lines).
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies values on top of `config`, validating each one.
void apply_config_values(RunConfig& config, const std::map<std::string, std::string>& values);

/// Semantic checks (parseable domain and coefficients, n >= 2, levels >= 3
/// for convergence). Throws ConfigError.
void validate_config(const RunConfig& config);

/// Problem described by the config (domain, coefficients, data). With
/// `manufactured`, f1 and g1 are derived from the exact solution.
VentcelProblem make_problem(const RunConfig& config);

/// Config-file text that parses back to the same RunConfig (command excluded).
std::string config_to_text(const RunConfig& config);

}  // namespace ventcel
