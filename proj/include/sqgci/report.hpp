#pragma once
// Run artifacts and the JSON reports.
//
// An iterate run directory holds
//   config.cfg           resolved configuration (canonical text)
//   run.json             per-step record written by the iterate run
//   ratios.csv           q, the five tracked ratios, residual, budget
//   energy_ledger.csv    q, t, H, energies, gap, gap / scale, rho flags
//   stress_samples.csv   q, t, norms of w, v_q, R_{q+1} and its pieces, guard state
//   level<L>_{v,w,R}.sfld  SFLD1 dumps of v_L, w_L and R_L at the first stress sample
//   summary.json         emitted from the files above (schema kSummarySchema)
//   timing.json          wall times (kept apart so that the rest is reproducible)
// The summary layout is documented in README.md.

#include <stdexcept>
#include <string>
#include <vector>

#include "sqgci/config.hpp"
#include "sqgci/diagnostics.hpp"
#include "sqgci/properties.hpp"
#include "sqgci/solver.hpp"

namespace sqgci {

inline constexpr const char* kSummarySchema = "sqgci-summary/1";
inline constexpr const char* kVerifySchema = "sqgci-verify/1";
inline constexpr const char* kOracleSchema = "sqgci-oracle/1";

// Missing or inconsistent run artifacts.
struct ArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DumpRecord {
    std::string file, field;  // field: v, w or R
    int level = 0;
};

// Files every iterate run directory must contain (besides the dumps).
const std::vector<std::string>& expected_run_files();

// Writes config.cfg, run.json, the CSV diagnostics and timing.json.
void write_run_artifacts(const std::string& dir, const RunConfig& cfg, const std::vector<LevelDiagnostics>& levels,
                         const std::vector<DumpRecord>& dumps);

// Builds summary.json from the artifacts in dir; returns its path. Throws
// ArtifactError listing the expected files when any is missing, and when a
// dump header disagrees with the record.
std::string emit_report(const std::string& dir);

// Parses a summary and serializes it again (round-trip check); throws
// ArtifactError on malformed JSON or a schema mismatch.
std::string reserialize_summary(const std::string& text);

// verify.json: per-property pass/fail with the configuration echo.
void write_verify_report(const std::string& dir, const RunConfig& cfg, const std::vector<SuiteResult>& suites);

// oracle.json: conservation report of a reference-solver run.
void write_oracle_report(const std::string& dir, const RunConfig& cfg, const Trajectory& tr,
                         const ConservationReport& rep, bool passed);

}  // namespace sqgci
