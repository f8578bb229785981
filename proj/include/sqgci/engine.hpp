#pragma once
// The q -> q+1 convex-integration step: energy gap, amplitudes, perturbation,
// stress assembly and the residual oracle. Stages are lazy: level q+1 asks
// level q for v_q(t) and R_q(t) at the times it needs and caches results.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "sqgci/field.hpp"
#include "sqgci/pseudo_product.hpp"
#include "sqgci/scheme.hpp"
#include "sqgci/transport.hpp"

namespace sqgci {

struct EngineOptions {
    double fd_fraction = 1e-3;  // step of the centred differences, in units of tau_{q+1}
    bool strict_guard = false;  // abort instead of saturating when ||R_q|| > eps_gamma lambda rho_j
    double guard_margin = 0.9;  // saturation targets guard_margin * eps_gamma
    PseudoProductOptions pseudo;
    FlowOptions flow;
    std::size_t cache_limit = 48;  // per-stage cache entries for velocity / wave / stress
};

// Level-q pair (v_q, R_q), sampled lazily in time.
class Stage {
public:
    virtual ~Stage() = default;
    int level() const { return level_; }
    const TorusGrid& grid() const { return grid_; }
    const SchemeParams& params() const { return params_; }
    virtual VectorField velocity(double t) const = 0;  // v_q on grid()
    virtual StressField stress(double t) const = 0;    // R_q on grid()
    VectorField transport_velocity(double t) const;    // u_q = Lambda v_q
    double hamiltonian(double t) const;

protected:
    Stage(int level, const TorusGrid& g, const SchemeParams& p) : level_(level), grid_(g), params_(p) {}
    int level_;
    TorusGrid grid_;
    SchemeParams params_;
};

// (v_0, R_0) = (0, 0)
class BaseStage : public Stage {
public:
    explicit BaseStage(const SchemeParams& p, int n = 8) : Stage(0, TorusGrid(n), p) {}
    VectorField velocity(double) const override;
    StressField stress(double) const override;
};

// One wave W_{j,k} = chi_j P_{q+1,k}(a_{k,j} b_k(lambda Phi_j)) for k in Omega_j^+
// (its partner for -k is the complex conjugate).
struct WaveTerm {
    long j = 0;
    Vec2 k;
    VectorField W;       // complex, frequency support in |xi/lambda - k| <= 1/8
    ScalarField theta;   // perp-divergence of W
    ScalarField chi2a2;  // chi_j^2 a_{k,j}^2 (real)
};

struct WaveSample {
    double t = 0.0;
    VectorField w;  // real perturbation w_{q+1}(t)
    std::vector<WaveTerm> terms;
    // pointwise diagnostics over the grid
    double principal_residual = 0.0;   // max |O_1| (traceless principal sum)
    double approx_stress = 0.0;        // max |R_q(x,t) - sum_j chi_j^2 R_{q,j}(x,t)|
    double saturation_leftover = 0.0;  // max |sum_j chi_j^2 (1 - s_j) R_{q,j}|
    double gamma_min = 0.0;            // min over points of gamma_k^2 / gamma_k^2(Id)
};

struct JInfo {
    double rho = 0.0;       // rho_j
    double stress_c0 = 0.0; // ||R_q(jtau)||_C0
    double guard_ratio = 0.0;  // ||R_q(jtau)|| / (lambda rho_j)
    double saturation = 1.0;   // s_j in [0, 1]
    int substeps = 0;          // flow-map substeps (fixed per j)
    std::shared_ptr<PointEvaluator> r11, r12;  // R_q(., jtau)
};

struct StressDiagnostics {
    double principal_residual = 0.0;
    double approx = 0.0;
    double saturation_leftover = 0.0;
    double low = 0.0;             // ||R_{O,low}||_C0
    double commutator = 0.0;      // ||sum of Q remainders||_C0
    double high = 0.0;            // ||R_{O,high}||_C0
    double high_leakage = 0.0;    // ||(I - P_annulus) high||_C0 / ||high||_C0
    double quadrature = 0.0;      // ||div(R_low(nodes) - R_low(nodes/2))||_C0
    double gamma_min = 0.0;
};

struct StressBundle {
    double t = 0.0;
    StressField R_T, R_N, R_D, R_O, total;
    VectorField w, dtw;
    StressDiagnostics diag;
};

struct ResidualReport {
    double residual = 0.0;       // ||P(dt v + N(v,v) + Lambda^g v) - P div R||_C0
    double div_stress = 0.0;     // ||div R_{q+1}||_C0
    double budget_fd = 0.0;      // ||P(D4 w - D6 w)||_C0: truncation of the stress-side derivative
    double budget_quadrature = 0.0;
    double budget_interpolation = 0.0;
    double budget_inherited = 0.0;  // residual of the previous level
    double budget_roundoff = 0.0;
    double budget() const {
        return budget_fd + budget_quadrature + budget_interpolation + budget_inherited + budget_roundoff;
    }
};

class StepStage : public Stage {
public:
    // Builds level q+1 = prev.level() + 1 on an n x n grid (n >= 4.5 lambda_{q+1}).
    StepStage(std::shared_ptr<const Stage> prev, const HamiltonianProfile& H, const EngineOptions& opt, int n);

    const Stage& previous() const { return *prev_; }
    double lambda() const { return lambda_; }
    double tau() const { return partition_.tau(); }
    const TimePartition& partition() const { return partition_; }

    // energy gap rho(t) of the level-q velocity and rho_j = rho(j tau)
    double rho(double t) const;
    double rho_j(long j) const;
    const JInfo& j_info(long j) const;

    FlowMap flow_map(long j, double t) const;
    WaveSample wave_sample(double t, bool with_terms = true) const;
    VectorField wave(double t) const;
    StressBundle stress_bundle(double t) const;

    VectorField velocity(double t) const override;
    StressField stress(double t) const override;

    // bundle: a stress_bundle(t) computed earlier (recomputed when null)
    ResidualReport residual_oracle(double t, const StressBundle* bundle = nullptr) const;

    // D_{t,q+1} f for f = v_{q+1} and R_{q+1} (centred differences, step h)
    VectorField material_derivative_velocity(double t) const;
    StressField material_derivative_stress(double t) const;
    VectorField material_derivative_transport(double t) const;

    double fd_step() const { return opt_.fd_fraction * tau(); }
    const EngineOptions& options() const { return opt_; }

private:
    std::shared_ptr<const Stage> prev_;
    HamiltonianProfile H_;
    EngineOptions opt_;
    double lambda_;
    TimePartition partition_;
    std::shared_ptr<VelocitySource> uq_;

    mutable std::mutex mutex_;
    mutable std::map<long, JInfo> jinfo_;
    mutable std::map<double, VectorField> wave_cache_;
    mutable std::map<double, VectorField> velocity_cache_;
    mutable std::map<double, StressField> stress_cache_;
    mutable std::map<double, double> energy_cache_;

    double previous_energy(double t) const;
    StressField assemble_low(const std::vector<WaveTerm>& terms, const PseudoProductOptions& pp,
                             StressField* remainder, double* low_norm) const;
};

// Centred first derivatives from samples at t + i h (fourth and sixth order).
VectorField central_difference4(const VectorField& m2, const VectorField& m1, const VectorField& p1,
                                const VectorField& p2, double h);
VectorField central_difference6(const VectorField& m3, const VectorField& m2, const VectorField& m1,
                                const VectorField& p1, const VectorField& p2, const VectorField& p3, double h);

// Integer lambda k with k from the direction sets (lambda a multiple of 5).
void lattice_vector(const Vec2& k, double lambda, int& k1, int& k2);

// Grid size used for level q (>= 4.5 lambda_q, FFT friendly).
int level_grid_size(double lambda);

// Builds levels 1..q_max+1; the last level uses grid size n_last.
std::vector<std::shared_ptr<const StepStage>> build_tower(const SchemeParams& p, const HamiltonianProfile& H,
                                                          const EngineOptions& opt, int q_max, int n_last);

}  // namespace sqgci
