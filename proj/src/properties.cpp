#include "sqgci/properties.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "sqgci/analysis.hpp"
#include "sqgci/diagnostics.hpp"
#include "sqgci/engine.hpp"
#include "sqgci/io.hpp"
#include "sqgci/operators.hpp"
#include "sqgci/pseudo_product.hpp"
#include "sqgci/solver.hpp"
#include "sqgci/spectral.hpp"
#include "sqgci/transport.hpp"
#include "sqgci/waves.hpp"

namespace sqgci {

namespace {

using Rng = std::mt19937_64;

// independent stream per suite so that suites can run in any order
Rng suite_rng(const RunConfig& cfg, const std::string& suite) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a of the suite name
    for (unsigned char c : suite) h = (h ^ c) * 1099511628211ULL;
    std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(h), std::uint32_t(h >> 32)};
    return Rng(seq);
}

// real mean-zero field with Gaussian coefficients on rmin <= |k| <= radius
ScalarField random_field(const TorusGrid& g, double radius, Rng& rng, double rmin = 0.0) {
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g, true);
    int R = int(radius);
    for (int k1 = 0; k1 <= R; ++k1)
        for (int k2 = -R; k2 <= R; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            double r = std::hypot(k1, k2);
            if (r > radius || r < rmin) continue;
            cplx c(N(rng), N(rng));
            f.coeff_ref(k1, k2) = c;
            f.coeff_ref(-k1, -k2) = std::conj(c);
        }
    return f;
}

VectorField random_div_free(const TorusGrid& g, double radius, Rng& rng) {
    return perp_grad(random_field(g, radius, rng));
}

// complex field supported in |xi/lambda - c| <= radius
ScalarField localized_field(const TorusGrid& g, const Vec2& c, double lambda, double radius, Rng& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField f(g, false);
    int h = g.n / 2;
    for (int k1 = -h + 1; k1 < h; ++k1)
        for (int k2 = -h + 1; k2 < h; ++k2)
            if (std::hypot(k1 / lambda - c.x, k2 / lambda - c.y) <= radius) f.coeff_ref(k1, k2) = cplx(N(rng), N(rng));
    return f;
}

// real plane wave 2 Re(a i k^perp e^{i lambda k.x})
VectorField plane_wave(const Vec2& k, double lambda, double a, const TorusGrid& g) {
    VectorField W = beltrami_pair(k, lambda, g).b;
    W *= cplx(a);
    VectorField out = W + W.conj();
    out[0].set_real(true);
    out[1].set_real(true);
    return out;
}

double rel_coeff(const VectorField& err, const VectorField& ref) {
    double s = ref.max_abs_coeff();
    return err.max_abs_coeff() / (s > 0.0 ? s : 1.0);
}
double rel_coeff(const ScalarField& err, const ScalarField& ref) {
    double s = ref.max_abs_coeff();
    return err.max_abs_coeff() / (s > 0.0 ? s : 1.0);
}

class SuiteBuilder {
public:
    SuiteBuilder(const std::string& name, const RunConfig& cfg) : cfg_(cfg) { out_.name = name; }
    // value <= tolerance(key)
    void tol(const std::string& name, const std::string& key, double value, std::string detail = {}) {
        add(name, key, value, cfg_.tolerance(key), true, std::move(detail));
    }
    void at_most(const std::string& name, double value, double bound, std::string detail = {}) {
        add(name, {}, value, bound, true, std::move(detail));
    }
    void at_least(const std::string& name, double value, double bound, std::string detail = {}) {
        add(name, {}, value, bound, false, std::move(detail));
    }
    SuiteResult finish(double seconds) {
        out_.seconds = seconds;
        return std::move(out_);
    }

private:
    void add(const std::string& name, const std::string& key, double value, double threshold, bool upper,
             std::string detail) {
        PropertyResult p;
        p.suite = out_.name;
        p.name = name;
        p.tolerance_key = key;
        p.value = value;
        p.threshold = threshold;
        p.upper = upper;
        p.pass = std::isfinite(value) && (upper ? value <= threshold : value >= threshold);
        p.detail = std::move(detail);
        out_.properties.push_back(std::move(p));
    }
    const RunConfig& cfg_;
    SuiteResult out_;
};

// ---------------------------------------------------------------- suites

void suite_operators(SuiteBuilder& S, Rng& rng) {
    TorusGrid g(64);
    const int trials = 100;
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> J(0, 5);
    std::uniform_int_distribution<int> L(1, 4);
    double comp = 0, idem = 0, divb = 0, eig = 0, magic = 0;
    for (int s = 0; s < trials; ++s) {
        ScalarField f = random_field(g, 20.0, rng);
        double a = U(rng), b = U(rng);
        ScalarField ab = fractional_laplacian(f, a + b);
        comp = std::max(comp, rel_coeff(fractional_laplacian(fractional_laplacian(f, a), b) - ab, ab));

        VectorField h(random_field(g, 20.0, rng), random_field(g, 20.0, rng));
        VectorField p = leray_project(h);
        idem = std::max(idem, rel_coeff(leray_project(p) - p, p));

        VectorField d = random_div_free(g, 20.0, rng);
        divb = std::max(divb, rel_coeff(divergence(inverse_divergence(d)) - d, d));

        // Beltrami combination over one direction set at frequency lambda
        double lam = 5.0 * L(rng);
        const auto& ds = direction_set(1 + (J(rng) & 1));
        VectorField bel(g, false);
        ScalarField pot(g, false);
        for (const auto& k : ds.all()) {
            cplx amp(U(rng), U(rng));
            auto bp = beltrami_pair(k, lam, g);
            bp.b *= amp;
            bp.c *= amp;
            bel += bp.b;
            pot += bp.c;
        }
        eig = std::max(eig, rel_coeff(fractional_laplacian(bel, 1.0) - lam * bel, lam * bel));
        eig = std::max(eig, rel_coeff(-1.0 * perp_divergence(bel) - lam * pot, lam * pot));

        VectorField fd = random_div_free(g, 10.0, rng);
        VectorField gv(random_field(g, 10.0, rng), random_field(g, 10.0, rng));
        VectorField n1 = nonlinear_N(fd, gv);
        magic = std::max(magic, rel_coeff(n1 - nonlinear_N_magic(fd, gv), n1));
    }
    S.tol("lambda_composition", "operators.lambda_composition", comp, "Lambda^a Lambda^b = Lambda^(a+b), 100 fields");
    S.tol("leray_idempotence", "operators.leray_idempotence", idem, "P P = P, 100 fields");
    S.tol("div_inverse_divergence", "operators.div_inverse_divergence", divb, "div B f = f, 100 div-free fields");
    S.tol("beltrami_eigenrelation", "operators.beltrami_eigenrelation", eig,
          "Lambda b = lambda b and -perp_div b = lambda c, 100 combinations");
    S.tol("magic_identity", "operators.magic_identity", magic, "N(f,g) = R(perp_div f) perp_div g, 100 pairs");
}

void suite_geometry(SuiteBuilder& S, Rng& rng) {
    const double expect[3] = {7.0 / 16.0, 25.0 / 32.0, 25.0 / 32.0};
    double id_err = 0.0;
    for (int j : {1, 2}) {
        auto g2 = direction_set(j).gamma_squared(Sym2::identity());
        for (int i = 0; i < 3; ++i) id_err = std::max(id_err, std::abs(g2[i] - expect[i]));
    }
    double eps = direction_set(1).epsilon_gamma();
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double rec = 0.0;
    for (int s = 0; s < 1000; ++s) {
        Sym2 e{U(rng), U(rng), U(rng)};
        e = e * (eps * std::abs(U(rng)) / e.op_norm());
        Sym2 R = Sym2::identity() + e;
        for (int j : {1, 2}) {
            const auto& ds = direction_set(j);
            auto g = ds.gamma_coefficients(R);
            rec = std::max(rec, (ds.reconstruct({g[0] * g[0], g[1] * g[1], g[2] * g[2]}) - R).op_norm());
        }
    }
    S.tol("gamma_identity", "geometry.gamma_identity", id_err, "gamma^2(Id) = {7/16, 25/32, 25/32}");
    S.tol("reconstruction", "geometry.reconstruction", rec, "1000 matrices within eps_gamma of Id");
    S.at_least("epsilon_gamma", eps, 0.05, "positivity radius eps_gamma = " + format_double(eps));
}

void suite_pseudo(SuiteBuilder& S, Rng& rng) {
    std::uniform_int_distribution<int> U(-60, 60);
    double mirror = 0.0;
    for (int tested = 0; tested < 1000;) {
        Vec2 eta{double(U(rng)), double(U(rng))};
        if (eta.norm() == 0.0) continue;
        auto s = s_symbol(-eta, eta);
        mirror = std::max({mirror, std::abs(s[0] - cplx(0.0, eta.x / eta.norm())),
                           std::abs(s[1] - cplx(0.0, eta.y / eta.norm()))});
        ++tested;
    }
    S.tol("mirror_symbol", "pseudo.mirror_symbol", mirror, "s^m(-eta, eta) = i eta^m/|eta|, 1000 lattice pairs");

    TorusGrid g(128);
    double lambda = 40.0, worst = 0.0;
    for (const Vec2& k : {Vec2{1, 0}, Vec2{0.6, 0.8}, Vec2{-0.8, 0.6}}) {
        ScalarField a = localized_field(g, k, lambda, 0.125, rng);
        ScalarField b = localized_field(g, -k, lambda, 0.125, rng);
        VectorField T = nonlinear_T(a, b);
        worst = std::max(worst, c_norm(T - t_decomposition(a, b).sum(), 0) / c_norm(T, 0));
    }
    S.tol("decomposition", "pseudo.decomposition", worst, "T = grad part + div part, localized pairs at n = 128");

    TorusGrid g2(64);
    Vec2 k{0.6, 0.8};
    ScalarField a = localized_field(g2, k, 20.0, 0.125, rng);
    ScalarField b = localized_field(g2, -k, 20.0, 0.125, rng);
    VectorField T = nonlinear_T(a, b);
    double scale = c_norm(T, 0);
    std::vector<double> res;
    for (int nodes : {1, 2, 4}) {
        PseudoProductOptions o;
        o.quad.nodes = nodes;
        res.push_back(c_norm(T - t_decomposition(a, b, o).sum(), 0) / scale);
    }
    double ratio = std::min(res[0] / res[1], res[1] / res[2]);
    S.at_least("refinement_ratio", ratio, 4.0,
               "residual reduction per doubling of r-nodes (1, 2, 4): " + format_double(res[0]) + ", " +
                   format_double(res[1]) + ", " + format_double(res[2]));
}

void suite_beltrami(SuiteBuilder& S, Rng& rng) {
    TorusGrid g(64);
    std::normal_distribution<double> N(0.0, 1.0);
    double div_form = 0.0, zero_mode = 0.0;
    for (int trial = 0; trial < 10; ++trial)
        for (int j : {1, 2})
            for (double lam : {5.0, 10.0}) {
                std::vector<cplx> a(6);
                for (int i = 0; i < 3; ++i) {
                    a[i] = cplx(N(rng), N(rng));
                    a[i + 3] = std::conj(a[i]);
                }
                auto r = beltrami_identity_check(direction_set(j), a, lam, g);
                div_form = std::max(div_form, r.divergence_form);
                zero_mode = std::max(zero_mode, r.zero_mode);
            }
    S.tol("divergence_form", "beltrami.divergence_form", div_form, "div(W (x) W) = grad of quadratic, both sets");
    S.tol("zero_mode", "beltrami.zero_mode", zero_mode, "sum W_k (x) W_-k = sum |a_k|^2 k^perp (x) k^perp");
}

void suite_flow(SuiteBuilder& S, Rng& rng) {
    TorusGrid g(32);
    VectorField s(g);  // shear (sin x2, 0)
    s[0].coeff_ref(0, 1) = cplx(0, -0.5);
    s[0].coeff_ref(0, -1) = cplx(0, 0.5);
    SteadyVelocity su(s);
    double tau = 0.05, err = 0.0;
    FlowOptions o;
    o.substeps = 64;
    auto sh = solve_flow_map(su, 2 * tau, 5.5 * tau, g, o);
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            std::size_t i = std::size_t(a) * g.n + b;
            err = std::max({err, std::abs(sh.d1[i] + 3.5 * tau * std::sin(g.x(b))), std::abs(sh.d2[i])});
        }
    S.tol("shear", "flow.shear", err, "shear flow closed form, 64 substeps");

    TorusGrid g2(48);
    VectorField u = random_div_free(g2, 4.0, rng);
    u *= 1.0 / c_norm(u, 1);
    SteadyVelocity uu(u);
    auto fm = solve_flow_map(uu, 0.0, 0.4, g2);
    double drift = 0.0;
    for (double j : fm.jacobian()) drift = std::max(drift, std::abs(j - 1.0));
    S.tol("jacobian_drift", "flow.jacobian_drift", drift, "det grad Phi - 1 over 4 tau, ||grad u|| tau = 0.1");

    std::uniform_real_distribution<double> T(-3.0, 5.0), Tau(0.01, 0.2);
    double pu = 0.0;
    for (int r = 0; r < 5; ++r) {
        TimePartition P(Tau(rng));
        for (int i = 0; i < 2000; ++i) pu = std::max(pu, std::abs(P.partition_sum(T(rng)) - 1.0));
    }
    S.tol("partition_of_unity", "flow.partition_of_unity", pu, "sum_j chi_j^2 = 1 at 10^4 times");
}

double rho_max_level(const StepStage& st, const HamiltonianProfile& H) {
    double m = 0.0;
    for (long j : st.partition().covering(H.t0, H.t1)) m = std::max(m, st.rho_j(j));
    return m;
}

void suite_engine(SuiteBuilder& S, Rng& rng, const RunConfig& cfg) {
    auto tower = build_tower(cfg.scheme, cfg.profile, cfg.engine_options(), 0, 128);
    const StepStage& st = *tower.back();
    double lam = st.lambda(), tau = st.tau(), rmax = rho_max_level(st, cfg.profile);
    // times spread over the support of the profile
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double principal = 0.0;
    double span = cfg.profile.t1 - cfg.profile.t0;
    for (int i = 0; i < 16; ++i) {
        double t = cfg.profile.t0 + span * (i + U(rng)) / 16.0;
        principal = std::max(principal, st.wave_sample(t, false).principal_residual);
    }
    S.tol("principal_cancellation", "engine.principal_cancellation", rmax > 0 ? principal / (lam * rmax) : principal,
          "max |O_1| / (lambda_1 rho_max) at 16 times, level 1, n = 128");

    // stress samples inside the overlap of two cutoffs (t / tau within 1/4 of an integer),
    // where the time derivative of the partition does not vanish
    double mid = 0.5 * (cfg.profile.t0 + cfg.profile.t1);
    auto overlap_time = [&](double tau_l) { return (std::round(mid / tau_l) + 0.5 * (U(rng) - 0.5)) * tau_l; };
    double t = overlap_time(tau);
    StressBundle B = st.stress_bundle(t);
    double energy = 0.0;
    for (long j : st.partition().active(t)) {
        double chi = st.partition().chi(j, t);
        energy += chi * chi * st.rho_j(j);
    }
    double Hw = hamiltonian(B.w);
    double expect = 4.0 * kTwoPi * kTwoPi * lam * energy;
    S.tol("energy_identity", "engine.energy_identity", std::abs(Hw - expect) / std::max(expect, 1e-300),
          "H(w) = 4 (2 pi)^2 lambda sum chi_j^2 rho_j at the profile midpoint");
    double sup = std::max({support_excess(B.w, lam / 2, 2 * lam), support_excess(st.velocity(t), 0.0, 2 * lam),
                           support_excess(B.total, 0.0, 4 * lam)});
    S.tol("support", "engine.support", sup, "w in annulus(lambda/2, 2 lambda), v in ball(2 lambda), R in ball(4 lambda)");
    S.tol("divergence_free", "engine.divergence_free", B.w.divergence_defect(), "w divergence free");
    ResidualReport r = st.residual_oracle(t, &B);
    S.at_most("residual_within_budget", r.residual / r.budget(), 1.0,
              "residual " + format_double(r.residual) + " vs budget " + format_double(r.budget()));
    S.tol("budget_relative", "engine.budget_relative", r.budget() / r.div_stress,
          "budget / ||div R_1|| (div R_1 = " + format_double(r.div_stress) + ")");

    // second level: disjoint-support energy additivity and zero-stress propagation
    auto two = build_tower(cfg.scheme, cfg.profile, cfg.engine_options(), 1,
                           level_grid_size(cfg.scheme.lambda(2)));
    const StepStage& s2 = *two[1];
    double t2 = overlap_time(s2.tau());
    VectorField v2 = s2.velocity(t2), v1 = resample(two[0]->velocity(t2), s2.grid());
    VectorField w2 = v2 - v1;
    double H2 = hamiltonian(v2);
    S.tol("hamiltonian_additivity", "engine.hamiltonian_additivity",
          std::abs(H2 - hamiltonian(v1) - hamiltonian(w2)) / std::max(H2, 1e-300),
          "H(v_2) = H(v_1) + H(w_2) at one time");
    double zero_t = cfg.profile.t0 + 1e-3 * span;
    double zero_dev = 0.0;
    bool all_zero = true;
    for (long j : s2.partition().active(zero_t)) all_zero = all_zero && s2.rho_j(j) == 0.0;
    if (all_zero) {
        zero_dev = s2.wave(zero_t).max_abs_coeff() +
                   c_norm(s2.stress(zero_t) - resample(two[0]->stress(zero_t), s2.grid()), 0);
    }
    S.at_most("zero_stress_propagation", zero_dev, 0.0,
              all_zero ? "w = 0 and R_2 = R_1 where every covering rho_j vanishes"
                       : "no vanishing-rho window found at the profile start");
}

void suite_solver(SuiteBuilder& S, Rng& rng) {
    TorusGrid g(32);
    ScalarField m = ScalarField::mode(g, 2, 1, 0.5, false) + ScalarField::mode(g, -2, -1, 0.5, false);
    m.set_real(true);
    ScalarField th = m;
    double step = 0.0;
    for (int i = 0; i < 10; ++i) {
        ScalarField nx = sqg_step(th, 1e-2, 0.0);
        step = std::max(step, (nx - th).max_abs_coeff());
        th = nx;
    }
    S.tol("plane_wave", "solver.plane_wave", step, "steady plane wave, drift per step");

    ScalarField init = random_field(g, 5.0, rng);
    init *= 0.1 / c_norm(init, 0);
    SolverConfig c;
    c.n = 32;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.record_every = 10;
    auto rep = conservation_report(integrate_sqg(init, c), 0.0);
    S.tol("drift", "solver.drift", std::max(rep.hamiltonian_drift, rep.l2_drift),
          "relative Hamiltonian and L2 drift over 1000 steps, gamma = 0");
    c.gamma = 1.0;
    c.t_end = 0.2;
    c.record_every = 1;
    auto rep1 = conservation_report(integrate_sqg(init, c), 1.0);
    S.at_least("strict_decrease", rep1.strict_hamiltonian_decrease ? 1.0 : 0.0, 1.0,
               "Hamiltonian strictly decreasing for gamma = 1");

    TorusGrid g48(48);
    std::normal_distribution<double> N(0.0, 1.0);
    VectorField v(g48);
    for (int j : {1, 2})
        for (const auto& k : direction_set(j).plus()) v += plane_wave(k, 5.0, N(rng), g48);
    const int M = 33;
    std::vector<VectorField> samples(M, v);
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        VectorField psi = random_div_free(g48, 8.0, rng);
        psi *= 1.0 / c_norm(psi, 0);
        TestField tf{[psi](double t) { return std::pow(std::sin(kPi * t), 2) * psi; },
                     [psi](double t) { return kPi * std::sin(2 * kPi * t) * psi; }};
        worst = std::max(worst, std::abs(weak_form_residual(samples, 0.0, 1.0 / (M - 1), tf, 0.0)));
    }
    S.tol("weak_form", "solver.weak_form", worst, "steady single shell |k| = 5 against 20 test fields");
}

void suite_io(SuiteBuilder& S, Rng& rng) {
    TorusGrid g(24);
    ScalarField s = random_field(g, 7.0, rng);
    VectorField v = random_div_free(g, 7.0, rng);
    StressField r(random_field(g, 7.0, rng), random_field(g, 7.0, rng));
    double worst = 0.0;
    for (const FieldDump& d : {make_dump(s, 0.5), make_dump(v, 1.5), make_dump(r, 2.5)}) {
        FieldDump e = decode_sfld1(encode_sfld1(d));
        bool same = e.n == d.n && e.kind == d.kind && e.t == d.t && e.blocks == d.blocks;
        worst = std::max(worst, same ? 0.0 : 1.0);
    }
    S.tol("roundtrip", "io.roundtrip", worst, "SFLD1 encode/decode reproduces every sample bit for bit");
}

}  // namespace

bool SuiteResult::passed() const {
    for (const auto& p : properties)
        if (!p.pass) return false;
    return true;
}

const std::vector<std::string>& property_suites() {
    static const std::vector<std::string> s = {"operators", "geometry", "pseudo_product", "beltrami",
                                               "flow",      "engine",   "solver",         "io"};
    return s;
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteBuilder S(name, cfg);
    Rng rng = suite_rng(cfg, name);
    if (name == "operators") suite_operators(S, rng);
    else if (name == "geometry") suite_geometry(S, rng);
    else if (name == "pseudo_product") suite_pseudo(S, rng);
    else if (name == "beltrami") suite_beltrami(S, rng);
    else if (name == "flow") suite_flow(S, rng);
    else if (name == "engine") suite_engine(S, rng, cfg);
    else if (name == "solver") suite_solver(S, rng);
    else if (name == "io") suite_io(S, rng);
    else throw ConfigError("unknown property suite '" + name + "'");
    return S.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::vector<SuiteResult> run_all_suites(const RunConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const auto& s : property_suites()) out.push_back(run_suite(s, cfg));
    return out;
}

}  // namespace sqgci
