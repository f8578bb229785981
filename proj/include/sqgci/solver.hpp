#pragma once
// Pseudo-spectral reference integrator for SQG and dissipative SQG
//   d_t theta + u . grad theta + Lambda^gamma theta = 0,  u = R^perp theta,
// with classical RK4 and an exact integrating factor for Lambda^gamma.

#include <string>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

struct SolverConfig {
    int n = 64;
    double dt = 1e-3;
    double gamma = 0.0;  // dissipation order; 0 disables the dissipative term
    double t_end = 1.0;
    double cfl_max = 0.5;
    int record_every = 1;  // trajectory stride (steps)
};

// -u . grad theta (dealiased, Nyquist lines removed); throws PreconditionError on nonzero mean
ScalarField sqg_rhs(const ScalarField& theta);

// CFL number dt * max|u| * n / (2 pi)
double cfl_number(const ScalarField& theta, double dt);

// One integrating-factor RK4 step; throws CflViolation when the CFL number exceeds cfl_max.
ScalarField sqg_step(const ScalarField& theta, double dt, double gamma, double cfl_max = 0.5);

struct ConservedSample {
    double t = 0.0, hamiltonian = 0.0, l2 = 0.0, l4 = 0.0, linf = 0.0;
};
ConservedSample conserved_quantities(const ScalarField& theta, double t);

struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> states;
    std::vector<ConservedSample> samples;
    int steps = 0;
    double max_cfl = 0.0;
};
Trajectory integrate_sqg(const ScalarField& theta0, const SolverConfig& cfg);

struct ConservationReport {
    double hamiltonian_drift = 0.0;  // max |H(t) - H(0)| / H(0)
    double l2_drift = 0.0;
    double l4_drift = 0.0;
    bool monotone_hamiltonian = true;  // non-increasing (checked when gamma > 0)
    bool monotone_l2 = true;
    bool strict_hamiltonian_decrease = true;
};
ConservationReport conservation_report(const Trajectory& tr, double gamma);

// <dir>/<stem>.csv (t, hamiltonian, l2, l4, linf) and one SFLD1 scalar dump per
// recorded state, <dir>/<stem>_<index>.sfld (index zero-padded to 5 digits).
void write_trajectory(const Trajectory& tr, const std::string& dir, const std::string& stem);

}  // namespace sqgci
