#pragma once
// Pipeline orchestration for the command-line tool: iterate, verify and
// oracle runs, and the mapping from errors to exit codes.

#include <functional>
#include <string>
#include <vector>

#include "sqgci/config.hpp"
#include "sqgci/diagnostics.hpp"
#include "sqgci/properties.hpp"

namespace sqgci {

enum ExitCode : int { kExitPass = 0, kExitConfig = 2, kExitAssertion = 3, kExitResolution = 4 };

// progress lines (one per finished stage); defaults to stdout
using Logger = std::function<void(const std::string&)>;
Logger stdout_logger();

struct IterateResult {
    std::vector<LevelDiagnostics> levels;
    std::string summary_path;
    std::vector<std::string> failed_assertions;  // "q=<q>: <name>"
    int exit_code = kExitPass;
};
// Validates cfg, builds levels 1..q_max+1, diagnoses each step, writes the
// artifacts into cfg.out_dir and emits summary.json.
IterateResult run_iterate(const RunConfig& cfg, const Logger& log = stdout_logger());

struct VerifyResult {
    std::vector<SuiteResult> suites;
    int failed = 0;
};
// Runs every property suite (or only `only` when non-empty); writes verify.json.
VerifyResult run_verify(const RunConfig& cfg, const std::vector<std::string>& only = {},
                        const Logger& log = stdout_logger());

struct OracleResult {
    double hamiltonian_drift = 0.0, l2_drift = 0.0;
    bool passed = false;
    int exit_code = kExitPass;
};
// Reference-solver run from seeded random initial data; writes theta.csv, the
// SFLD1 series theta_<index>.sfld and oracle.json.
OracleResult run_oracle(const RunConfig& cfg, const Logger& log = stdout_logger());

// Exit code for an exception escaping a run.
int exit_code_for(const std::exception& e);

}  // namespace sqgci
