#pragma once
// Time cutoffs, transport velocities, off-grid interpolation, back-to-labels
// flow maps and material derivatives.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "sqgci/field.hpp"

namespace sqgci {

// ---------------------------------------------------------------- cutoffs
// Master cutoff chi(s): supported in [1/2, 5/2], chi(s)^2 + chi(s-1)^2 = 1 on
// overlaps (sin/cos of a C-infinity step), so sum_j chi(s - j)^2 = 1 exactly.
double master_cutoff(double s);
double master_cutoff_derivative(double s);
double smooth_step_derivative(double s);

class TimePartition {
public:
    explicit TimePartition(double tau);
    double tau() const { return tau_; }
    double chi(long j, double t) const { return master_cutoff(t / tau_ - double(j)); }
    double dchi(long j, double t) const { return master_cutoff_derivative(t / tau_ - double(j)) / tau_; }
    // indices j with chi_j(t) > 0 (at most two), ascending
    std::vector<long> active(double t) const;
    // indices whose support meets [t0, t1]
    std::vector<long> covering(double t0, double t1) const;
    double partition_sum(double t) const;

private:
    double tau_;
};

// ---------------------------------------------------------------- interpolation
// Evaluates a spectral field at arbitrary points: exact separable
// trigonometric sums for narrow-band fields, tensor Lagrange interpolation on
// an oversampled grid otherwise.
class PointEvaluator {
public:
    enum class Method { Auto, Trigonometric, Lagrange };
    static constexpr int kMaxTrigWidth = 257;
    // min_band raises the band half-width used to size the oversampled grid, so
    // that evaluators of sibling components can share interpolation weights.
    explicit PointEvaluator(const ScalarField& f, Method method = Method::Auto, int stencil = 10, int min_band = 0);
    int band() const { return K_; }
    Method method() const { return method_; }
    int oversampled_size() const { return m_; }
    cplx at(double x1, double x2) const;
    double real_at(double x1, double x2) const;
    // out[i] = f(x1[i], x2[i])
    void eval_real(const std::vector<double>& x1, const std::vector<double>& x2, std::vector<double>& out) const;
    void eval(const std::vector<double>& x1, const std::vector<double>& x2, std::vector<cplx>& out) const;
    // two real fields at the same points, sharing interpolation weights when possible
    static void eval_real_pair(const PointEvaluator& a, const PointEvaluator& b, const std::vector<double>& x1,
                               const std::vector<double>& x2, std::vector<double>& oa, std::vector<double>& ob);

private:
    Method method_;
    bool real_;
    int K_ = 0;                   // trigonometric: band half-width
    std::vector<double> bre_, bim_;  // (2K+1)^2 coefficients, real and imaginary parts
    double trig_real(double x1, double x2) const;
    int m_ = 0, S_ = 0;           // Lagrange: oversampled size, stencil
    std::vector<double> re_, im_;  // samples with S_ wrap-around cells on each side
    std::vector<double> bary_;     // barycentric weights of the stencil nodes
    void lagrange_weights(double x, int& first, double* w) const;
    double lagrange_sum(const std::vector<double>& data, int f1, int f2, const double* w1, const double* w2) const;
};

// ---------------------------------------------------------------- velocities
class VelocitySource {
public:
    virtual ~VelocitySource() = default;
    virtual VectorField at(double s) const = 0;
};

class SteadyVelocity : public VelocitySource {
public:
    explicit SteadyVelocity(VectorField u) : u_(std::move(u)) {}
    VectorField at(double) const override { return u_; }

private:
    VectorField u_;
};

class FunctionVelocity : public VelocitySource {
public:
    explicit FunctionVelocity(std::function<VectorField(double)> f) : f_(std::move(f)) {}
    VectorField at(double s) const override { return f_(s); }

private:
    std::function<VectorField(double)> f_;
};

// Stores u on the uniform time grid s_i = i * spacing (memoized on demand)
// and interpolates linearly in time between stored samples.
class SampledVelocity : public VelocitySource {
public:
    SampledVelocity(std::function<VectorField(double)> exact, double spacing);
    VectorField at(double s) const override;
    VectorField sample(long i) const;
    double spacing() const { return dt_; }
    std::size_t cached() const;
    void trim(long keep_from);  // drop samples with index < keep_from

private:
    std::function<VectorField(double)> exact_;
    double dt_;
    mutable std::map<long, VectorField> cache_;
    mutable std::mutex mutex_;
};

// ---------------------------------------------------------------- flow maps
struct CflViolation : ResolutionError {
    int required_substeps;
    CflViolation(const std::string& msg, int req) : ResolutionError(msg), required_substeps(req) {}
};

struct FlowMap {
    double base_time = 0.0, time = 0.0;
    TorusGrid grid;
    // Phi(x) - x at grid points (periodic part), row-major physical samples
    std::vector<double> d1, d2;
    int substeps = 0;
    double max_cfl = 0.0;  // max over steps of |h| ||grad u||_C0
    VectorField displacement() const;
    // det grad Phi at grid points
    std::vector<double> jacobian() const;
    // ||grad Phi - Id||_C0 (operator norm)
    double gradient_deviation() const;
};

struct FlowOptions {
    int substeps = 0;        // 0: choose automatically from the CFL target
    int min_substeps = 4;
    double cfl_target = 0.1;  // automatic choice: |h| ||grad u|| <= target
    double cfl_max = 0.5;     // hard refusal threshold
};

// Back-to-labels map: Phi(x, t) = X(base_time) where dX/ds = u(X, s), X(t) = x.
FlowMap solve_flow_map(const VelocitySource& u, double base_time, double t, const TorusGrid& g,
                       const FlowOptions& opt = {});
// Forward characteristics from base_time to t starting at the grid points
// (positions returned unwrapped).
void forward_characteristics(const VelocitySource& u, double base_time, double t, const TorusGrid& g, int substeps,
                             std::vector<double>& x1, std::vector<double>& x2);

// psi = exp(i lambda (Phi - x).k) at grid points
std::vector<cplx> phase_deformation(const FlowMap& phi, const Vec2& k, double lambda);

// Stress composed with the flow map: R(Phi(x)) at grid points of phi.grid.
struct StressSamples {
    std::vector<double> m11, m12;
};
StressSamples transport_stress(const StressField& base, const FlowMap& phi);

// ---------------------------------------------------------------- material derivative
struct MaterialDerivativeResult {
    VectorField value;
    bool one_sided = false;
};
// D_t f = (f(t+h) - f(t-h)) / (2h) + u . grad f(t); callers supply f(t-h), f(t), f(t+h).
VectorField material_derivative(const VectorField& fm, const VectorField& f0, const VectorField& fp, double h,
                                const VectorField& u);
StressField material_derivative(const StressField& fm, const StressField& f0, const StressField& fp, double h,
                                const VectorField& u);
ScalarField material_derivative(const ScalarField& fm, const ScalarField& f0, const ScalarField& fp, double h,
                                const VectorField& u);
// Sampled-series version: samples at t_i = t0 + i*h; interior points use
// central differences, endpoints fall back to one-sided and are flagged.
MaterialDerivativeResult material_derivative(const std::vector<VectorField>& series, std::size_t i, double h,
                                             const VectorField& u);

ScalarField advect_scalar(const VectorField& u, const ScalarField& f);

}  // namespace sqgci
