#include "sqgci/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "sqgci/analysis.hpp"
#include "sqgci/io.hpp"
#include "sqgci/operators.hpp"
#include "sqgci/spectral.hpp"
#include "sqgci/transport.hpp"

namespace sqgci {

namespace {

void drop_nyquist(ScalarField& f) {
    const auto& g = f.grid();
    int n = g.n, h = n / 2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.freq(a) == -h || g.freq(b) == -h) f.data()[static_cast<std::size_t>(a) * n + b] = cplx{};
}

// exp(-|k|^gamma s) applied coefficient-wise
ScalarField damp(const ScalarField& f, double gamma, double s) {
    if (gamma <= 0.0 || s == 0.0) return f;
    return apply_multiplier(f, [gamma, s](int k1, int k2) {
        double k = std::hypot(k1, k2);
        return k == 0.0 ? 1.0 : std::exp(-std::pow(k, gamma) * s);
    });
}

}  // namespace

ScalarField sqg_rhs(const ScalarField& theta) {
    VectorField u = riesz_perp(theta);
    ProductSpace ps(theta.grid());
    auto u1 = ps.sample(u[0]), u2 = ps.sample(u[1]);
    auto d1 = ps.sample(spectral_derivative(theta, 1)), d2 = ps.sample(spectral_derivative(theta, 2));
    for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = -(u1[i] * d1[i] + u2[i] * d2[i]);
    ScalarField r = ps.back(u1, theta.real());
    drop_nyquist(r);
    r.data()[0] = cplx{};
    return r;
}

double cfl_number(const ScalarField& theta, double dt) {
    VectorField u = riesz_perp(theta);
    return std::abs(dt) * c_norm(u, 0) * theta.n() / kTwoPi;
}

ScalarField sqg_step(const ScalarField& theta, double dt, double gamma, double cfl_max) {
    double c = cfl_number(theta, dt);
    if (c > cfl_max)
        throw CflViolation("reference solver: CFL number " + std::to_string(c) + " exceeds " + std::to_string(cfl_max),
                           int(std::ceil(c / cfl_max)));
    double h = 0.5 * dt;
    ScalarField a = sqg_rhs(theta);
    ScalarField y2 = theta + h * a;
    ScalarField b = sqg_rhs(damp(y2, gamma, h));
    ScalarField th_h = damp(theta, gamma, h);
    ScalarField c3 = sqg_rhs(th_h + h * b);
    ScalarField y4 = damp(theta, gamma, dt) + dt * damp(c3, gamma, h);
    ScalarField d = sqg_rhs(y4);
    ScalarField inc = damp(a, gamma, dt);
    inc += 2.0 * damp(b + c3, gamma, h);
    inc += d;
    ScalarField out = damp(theta, gamma, dt) + (dt / 6.0) * inc;
    out.set_real(theta.real());
    return out;
}

ConservedSample conserved_quantities(const ScalarField& theta, double t) {
    ConservedSample s;
    s.t = t;
    s.hamiltonian = hamiltonian_scalar(theta);
    s.l2 = std::sqrt(kTwoPi * kTwoPi * coeff_energy(theta));
    auto x = theta.to_physical();
    double m4 = 0.0, mx = 0.0;
    for (double v : x) {
        m4 += v * v * v * v;
        mx = std::max(mx, std::abs(v));
    }
    s.l4 = std::pow(kTwoPi * kTwoPi * m4 / double(x.size()), 0.25);
    s.linf = mx;
    return s;
}

Trajectory integrate_sqg(const ScalarField& theta0, const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("solver: dt must be positive");
    Trajectory tr;
    ScalarField th = resample(theta0, TorusGrid(cfg.n));
    int steps = int(std::llround(cfg.t_end / cfg.dt));
    tr.times.push_back(0.0);
    tr.states.push_back(th);
    tr.samples.push_back(conserved_quantities(th, 0.0));
    for (int s = 1; s <= steps; ++s) {
        tr.max_cfl = std::max(tr.max_cfl, cfl_number(th, cfg.dt));
        th = sqg_step(th, cfg.dt, cfg.gamma, cfg.cfl_max);
        double t = s * cfg.dt;
        if (s % std::max(1, cfg.record_every) == 0 || s == steps) {
            tr.times.push_back(t);
            tr.states.push_back(th);
            tr.samples.push_back(conserved_quantities(th, t));
        }
    }
    tr.steps = steps;
    return tr;
}

ConservationReport conservation_report(const Trajectory& tr, double gamma) {
    ConservationReport r;
    if (tr.samples.empty()) return r;
    const auto& s0 = tr.samples.front();
    auto rel = [](double a, double b) { return b > 0.0 ? std::abs(a - b) / b : std::abs(a - b); };
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
        const auto& s = tr.samples[i];
        r.hamiltonian_drift = std::max(r.hamiltonian_drift, rel(s.hamiltonian, s0.hamiltonian));
        r.l2_drift = std::max(r.l2_drift, rel(s.l2, s0.l2));
        r.l4_drift = std::max(r.l4_drift, rel(s.l4, s0.l4));
        if (i > 0 && gamma > 0.0) {
            const auto& p = tr.samples[i - 1];
            if (s.hamiltonian > p.hamiltonian) r.monotone_hamiltonian = false;
            if (s.l2 > p.l2) r.monotone_l2 = false;
            if (!(s.hamiltonian < p.hamiltonian)) r.strict_hamiltonian_decrease = false;
        }
    }
    if (gamma <= 0.0) r.strict_hamiltonian_decrease = false;
    return r;
}

void write_trajectory(const Trajectory& tr, const std::string& dir, const std::string& stem) {
    std::filesystem::create_directories(dir);
    std::vector<std::vector<double>> rows;
    for (const auto& s : tr.samples) rows.push_back({s.t, s.hamiltonian, s.l2, s.l4, s.linf});
    write_csv(dir + "/" + stem + ".csv", {"t", "hamiltonian", "l2", "l4", "linf"}, rows);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "_%05zu.sfld", i);
        write_sfld1(dir + "/" + stem + name, make_dump(tr.states[i], tr.times[i]));
    }
}

}  // namespace sqgci
