#pragma once
// Per-step diagnostics of the iteration: the tracked norm ratios, stress
// pieces, guard state, hard assertions (supports, cancellation, additivity,
// divergence, residual budget) and the energy ledger.

#include <string>
#include <vector>

#include "sqgci/config.hpp"
#include "sqgci/engine.hpp"

namespace sqgci {

// Largest coefficient magnitude with |k| outside [rmin, rmax], relative to the
// largest coefficient overall (0 for a zero field).
double support_excess(const ScalarField& f, double rmin, double rmax);
double support_excess(const VectorField& f, double rmin, double rmax);
double support_excess(const StressField& f, double rmin, double rmax);

struct AssertionResult {
    std::string name;
    double value = 0.0, threshold = 0.0;
    bool pass = true;
};

struct LedgerSample {
    double t = 0.0;
    double H = 0.0;            // prescribed Hamiltonian
    double energy_prev = 0.0;  // int |Lambda^{1/2} v_q|^2
    double energy = 0.0;       // int |Lambda^{1/2} v_{q+1}|^2
    double gap = 0.0;          // H - energy
    double scale = 0.0;        // lambda_{q+2} delta_{q+2}
    bool rho_positive = false;  // every cutoff active at t has rho_j > 0
    bool rho_zero = false;      // every cutoff active at t has rho_j = 0
};

struct StressSampleRecord {
    double t = 0.0;
    double w_c0 = 0.0, v_prev_c1 = 0.0, stress_c0 = 0.0, dt_v_prev = 0.0, dt_stress_prev = 0.0;
    double R_T = 0.0, R_N = 0.0, R_D = 0.0, R_O = 0.0;
    StressDiagnostics diag;
    double guard_ratio = 0.0;  // max ||R_q(j tau)|| / (lambda rho_j) over active j with rho_j > 0
    double saturation = 1.0;   // min s_j over active j
    double rho_max = 0.0;      // max rho_j over active j
};

struct LevelDiagnostics {
    int q = 0;  // step q -> q + 1
    double lambda = 0.0, delta = 0.0, tau = 0.0;  // lambda_{q+1}, delta_{q+1}, tau_{q+1}
    int grid_n = 0;
    // the five tracked ratios (maxima over the stress samples)
    double ratio_w = 0.0;          // ||w_{q+1}||_C0 / delta_{q+1}^{1/2}
    double ratio_v = 0.0;          // ||v_q||_C1 / (delta_q^{1/2} lambda_q)
    double ratio_stress = 0.0;     // ||R_{q+1}||_C0 / (lambda_{q+2} delta_{q+2})
    double ratio_dt_v = 0.0;       // ||D_{t,q} v_q||_C0 / (delta_q lambda_q)
    double ratio_dt_stress = 0.0;  // ||D_{t,q} R_q||_C0 / (lambda_q delta_q^{1/2} lambda_{q+1} delta_{q+1})
    std::vector<StressSampleRecord> samples;
    ResidualReport residual;
    double residual_time = 0.0;
    std::vector<LedgerSample> ledger;
    std::vector<AssertionResult> assertions;
    double seconds = 0.0;  // wall time (kept out of deterministic reports)
    bool passed() const;
    // ledger verdicts over samples with rho_positive: gap / scale within [lo, hi]
    bool ledger_in_band(double lo, double hi) const;
    double ledger_min_gap() const;
};

struct DiagnosticsPlan {
    std::vector<double> stress_times;  // first one also runs the residual oracle
    std::vector<double> ledger_times;
    bool residual = true;
};

// Default sampling: stress samples spread over the middle half of the profile
// support, each placed at the tau_{q+1}/M cell midpoint just past the nearest
// multiple of tau_{q+1} (inside the overlap of two cutoffs); ledger samples at
// the cell midpoints of a uniform partition of the support.
DiagnosticsPlan default_plan(const RunConfig& cfg, const StepStage& st);

LevelDiagnostics diagnose_level(const StepStage& st, const DiagnosticsPlan& plan, const RunConfig& cfg);

}  // namespace sqgci
