#include "sqgci/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sqgci/analysis.hpp"
#include "sqgci/spectral.hpp"

namespace sqgci {

double support_excess(const ScalarField& f, double rmin, double rmax) {
    double mx = f.max_abs_coeff();
    if (mx == 0.0) return 0.0;
    const auto& g = f.grid();
    double out = 0.0;
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            double r = std::hypot(g.freq(a), g.freq(b));
            if (r >= rmin && r <= rmax) continue;
            out = std::max(out, std::abs(f.data()[std::size_t(a) * g.n + b]));
        }
    return out / mx;
}

double support_excess(const VectorField& f, double rmin, double rmax) {
    double m0 = f[0].max_abs_coeff(), m1 = f[1].max_abs_coeff(), mx = std::max(m0, m1);
    if (mx == 0.0) return 0.0;
    return std::max(support_excess(f[0], rmin, rmax) * m0, support_excess(f[1], rmin, rmax) * m1) / mx;
}

double support_excess(const StressField& f, double rmin, double rmax) {
    return support_excess(VectorField(f.m11, f.m12), rmin, rmax);
}

bool LevelDiagnostics::passed() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

bool LevelDiagnostics::ledger_in_band(double lo, double hi) const {
    for (const auto& s : ledger) {
        if (!s.rho_positive) continue;
        double r = s.gap / s.scale;
        if (!(r >= lo && r <= hi)) return false;
    }
    return true;
}

double LevelDiagnostics::ledger_min_gap() const {
    double m = ledger.empty() ? 0.0 : ledger.front().gap;
    for (const auto& s : ledger) m = std::min(m, s.gap);
    return m;
}

DiagnosticsPlan default_plan(const RunConfig& cfg, const StepStage& st) {
    DiagnosticsPlan p;
    const auto& H = cfg.profile;
    double span = H.t1 - H.t0, c = 0.5 * (H.t0 + H.t1);
    double cell = st.tau() / cfg.time_samples_per_tau;
    int S = cfg.stress_samples;
    for (int i = 0; i < S; ++i) {
        double t = c + (i - 0.5 * (S - 1)) * span / (2.0 * S);
        // cell midpoint just past an integer multiple of tau, where two cutoffs overlap
        double base = std::round(t / st.tau()) * st.tau();
        p.stress_times.push_back(base + (std::floor(0.1 * cfg.time_samples_per_tau) + 0.5) * cell);
    }
    int L = cfg.ledger_samples;
    for (int i = 0; i < L; ++i) p.ledger_times.push_back(H.t0 + span * (i + 0.5) / L);
    return p;
}

namespace {

void check(LevelDiagnostics& d, const std::string& name, double value, double threshold) {
    d.assertions.push_back({name, value, threshold, std::isfinite(value) && value <= threshold});
}

}  // namespace

LevelDiagnostics diagnose_level(const StepStage& st, const DiagnosticsPlan& plan, const RunConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    const SchemeParams& P = st.params();
    LevelDiagnostics d;
    int q = st.level() - 1;
    d.q = q;
    d.lambda = st.lambda();
    d.delta = P.delta(q + 1);
    d.tau = st.tau();
    d.grid_n = st.grid().n;
    double lam = d.lambda, stress_scale = P.lambda(q + 2) * P.delta(q + 2);
    const auto* prev_step = dynamic_cast<const StepStage*>(&st.previous());

    double principal = 0.0, sup_w = 0.0, sup_v = 0.0, sup_R = 0.0, div_w = 0.0, additivity = 0.0;
    for (std::size_t i = 0; i < plan.stress_times.size(); ++i) {
        double t = plan.stress_times[i];
        StressSampleRecord r;
        r.t = t;
        for (long j : st.partition().active(t)) {
            const JInfo& ji = st.j_info(j);
            r.rho_max = std::max(r.rho_max, ji.rho);
            if (ji.rho > 0.0) r.guard_ratio = std::max(r.guard_ratio, ji.guard_ratio);
            r.saturation = std::min(r.saturation, ji.saturation);
        }
        StressBundle B = st.stress_bundle(t);
        r.w_c0 = c_norm(B.w, 0);
        r.stress_c0 = c_norm(B.total, 0);
        r.R_T = c_norm(B.R_T, 0);
        r.R_N = c_norm(B.R_N, 0);
        r.R_D = c_norm(B.R_D, 0);
        r.R_O = c_norm(B.R_O, 0);
        r.diag = B.diag;
        VectorField v_prev = resample(st.previous().velocity(t), st.grid());
        VectorField v = st.velocity(t);
        r.v_prev_c1 = c_norm(v_prev, 1);
        if (prev_step) {
            r.dt_v_prev = c_norm(prev_step->material_derivative_velocity(t), 0);
            r.dt_stress_prev = c_norm(prev_step->material_derivative_stress(t), 0);
        }
        if (r.rho_max > 0.0) principal = std::max(principal, B.diag.principal_residual / (lam * r.rho_max));
        sup_w = std::max(sup_w, support_excess(B.w, lam / 2, 2 * lam));
        sup_v = std::max(sup_v, support_excess(v, 0.0, 2 * lam));
        sup_R = std::max(sup_R, support_excess(B.total, 0.0, 4 * lam));
        div_w = std::max(div_w, B.w.divergence_defect());
        double Hv = hamiltonian(v);
        if (Hv > 0.0) additivity = std::max(additivity, std::abs(Hv - hamiltonian(v_prev) - hamiltonian(B.w)) / Hv);

        d.ratio_w = std::max(d.ratio_w, r.w_c0 / std::sqrt(d.delta));
        if (q > 0) {
            double lq = P.lambda(q), dq = P.delta(q);
            d.ratio_v = std::max(d.ratio_v, r.v_prev_c1 / (std::sqrt(dq) * lq));
            d.ratio_dt_v = std::max(d.ratio_dt_v, r.dt_v_prev / (dq * lq));
            d.ratio_dt_stress = std::max(d.ratio_dt_stress, r.dt_stress_prev / (lq * std::sqrt(dq) * lam * d.delta));
        }
        d.ratio_stress = std::max(d.ratio_stress, r.stress_c0 / stress_scale);

        if (i == 0 && plan.residual) {
            d.residual = st.residual_oracle(t, &B);
            d.residual_time = t;
        }
        d.samples.push_back(r);
    }

    double zero_dev = 0.0, gap_deficit = 0.0;
    for (double t : plan.ledger_times) {
        LedgerSample s;
        s.t = t;
        s.H = cfg.profile.value(t);
        s.scale = stress_scale;
        VectorField v_prev = resample(st.previous().velocity(t), st.grid());
        VectorField v = st.velocity(t);
        s.energy_prev = hamiltonian(v_prev);
        s.energy = hamiltonian(v);
        s.gap = s.H - s.energy;
        auto active = st.partition().active(t);
        s.rho_positive = !active.empty();
        s.rho_zero = true;
        for (long j : active) {
            double rj = st.rho_j(j);
            s.rho_positive = s.rho_positive && rj > 0.0;
            s.rho_zero = s.rho_zero && rj == 0.0;
        }
        if (s.rho_zero) zero_dev = std::max(zero_dev, (v - v_prev).max_abs_coeff());
        gap_deficit = std::max(gap_deficit, -s.gap / std::max(s.H, 1e-300));
        d.ledger.push_back(s);
    }

    check(d, "principal_cancellation", principal, cfg.tolerance("engine.principal_cancellation"));
    check(d, "support_w_annulus", sup_w, cfg.tolerance("engine.support"));
    check(d, "support_v_ball", sup_v, cfg.tolerance("engine.support"));
    check(d, "support_R_ball", sup_R, cfg.tolerance("engine.support"));
    check(d, "w_divergence_free", div_w, cfg.tolerance("engine.divergence_free"));
    check(d, "hamiltonian_additivity", additivity, cfg.tolerance("engine.hamiltonian_additivity"));
    if (!plan.ledger_times.empty()) {
        // relative to H(t); roundoff allowance only
        check(d, "energy_gap_nonnegative", gap_deficit, 1e-12);
        check(d, "zero_stress_propagation", zero_dev, 0.0);
    }
    if (plan.residual && !plan.stress_times.empty()) {
        double b = d.residual.budget();
        check(d, "residual_within_budget", b > 0.0 ? d.residual.residual / b : d.residual.residual, 1.0);
    }
    d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return d;
}

}  // namespace sqgci
