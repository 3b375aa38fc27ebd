#pragma once

#include "ventcel/verify.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ventcel {

struct SuiteCase {
    std::string group;
    std::string name;
    double value = 0.0;
    std::string relation;  ///< "<", "<=", ">" or ">="
    double threshold = 0.0;
    bool pass = false;
};

struct SuiteResult {
    std::vector<SuiteCase> cases;
    std::vector<std::pair<std::string, ConvergenceReport>> convergence;
    bool all_pass() const;
};

/// Runs every check of the verification suite; randomized cases draw from `seed`.
SuiteResult run_verification_suite(std::uint64_t seed);

/// One "PASS|FAIL group/name value relation threshold" line per case, then a total.
void write_suite_summary(std::ostream& os, const SuiteResult& result);
/// "group,name,value,relation,threshold,pass".
void write_suite_csv(std::ostream& os, const SuiteResult& result);

}  // namespace ventcel
