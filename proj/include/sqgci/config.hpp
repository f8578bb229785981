#pragma once
// Run configuration: a flat key=value text format with [sections], CLI
// overrides (section.key=value and tolerance KEY=VAL), validation, and the
// derived scheme quantities echoed into every report.
//
//   [scheme]     lambda0, beta, gamma, q_max
//   [grid]       n (0 = smallest admissible), time_samples_per_tau, max_n
//   [profile]    name (cos2|bump), amplitude, t0, t1
//   [run]        seed, serial, out, stress_samples, ledger_samples,
//                strict_guard, guard_margin, fd_fraction
//   [oracle]     n, dt, t_end, gamma, radius, amplitude, record_every
//   [tolerances] <tolerance key> = <value>
//
// '#' and ';' start comments. Unknown sections or keys are configuration errors.

#include <map>
#include <string>
#include <vector>

#include "sqgci/engine.hpp"
#include "sqgci/scheme.hpp"
#include "sqgci/solver.hpp"

namespace sqgci {

struct OracleSettings {
    int n = 64;
    double dt = 1e-3;
    double t_end = 1.0;
    double gamma = 0.0;
    double radius = 6.0;     // initial data: random real field on 1 <= |k| <= radius
    double amplitude = 0.1;  // scaled to this max |theta|
    int record_every = 100;
};

struct RunConfig {
    std::string mode = "iterate";  // iterate | verify | oracle | report
    SchemeParams scheme;
    int q_max = 2;
    int grid_n = 0;  // grid of the last level; 0 picks the smallest admissible size
    int max_grid_n = 1024;  // resource ceiling (larger grids are refused)
    int time_samples_per_tau = 16;
    HamiltonianProfile profile;
    std::uint64_t seed = 1;
    bool serial = false;
    std::string out_dir = "run";
    int stress_samples = 3;
    int ledger_samples = 17;
    bool strict_guard = false;
    double guard_margin = 0.9;
    double fd_fraction = 1e-3;
    OracleSettings oracle;
    std::map<std::string, double> tolerances;  // resolved: defaults overlaid with overrides

    // grid_n, or the smallest admissible size when grid_n == 0
    int resolved_grid_n() const;
    double tolerance(const std::string& key) const;
    EngineOptions engine_options() const;
    SolverConfig solver_config() const;
};

// Default tolerance table (key -> value); overrides must name one of these keys.
const std::map<std::string, double>& default_tolerances();

RunConfig default_config();
// Parses text on top of `base`; throws ConfigError with the line number on bad input.
RunConfig parse_config(const std::string& text, const RunConfig& base = default_config());
RunConfig load_config(const std::string& path, const RunConfig& base = default_config());
// section.key=value (e.g. scheme.beta=0.7)
void apply_setting(RunConfig& cfg, const std::string& assignment);
// KEY=VAL for a tolerance key
void apply_tolerance(RunConfig& cfg, const std::string& assignment);

// Throws ConfigError for out-of-range parameters and ResolutionError when the
// grid cannot hold the last level exactly or exceeds the resource ceiling.
void validate(const RunConfig& cfg);

// Canonical text form (parse_config(to_text(c)) reproduces c).
std::string to_text(const RunConfig& cfg);

// Derived per-level quantities.
struct DerivedLevel {
    int q = 0;
    double lambda = 0.0, delta = 0.0, tau_next = 0.0;
    int grid_n = 0;  // grid used for level q + 1
};
std::vector<DerivedLevel> derived_levels(const RunConfig& cfg);

}  // namespace sqgci
