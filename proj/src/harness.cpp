#include "sqgci/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

#include "sqgci/io.hpp"
#include "sqgci/report.hpp"
#include "sqgci/solver.hpp"
#include "sqgci/spectral.hpp"
#include "sqgci/transport.hpp"

namespace sqgci {

namespace fs = std::filesystem;

Logger stdout_logger() {
    return [](const std::string& s) {
        std::fputs((s + "\n").c_str(), stdout);
        std::fflush(stdout);
    };
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
    if (dynamic_cast<const ResolutionError*>(&e)) return kExitResolution;
    return kExitAssertion;
}

IterateResult run_iterate(const RunConfig& cfg, const Logger& log) {
    validate(cfg);
    set_serial(cfg.serial);
    const std::string dir = cfg.out_dir;
    fs::create_directories(dir);
    IterateResult res;
    std::vector<DumpRecord> dumps;
    auto tower = build_tower(cfg.scheme, cfg.profile, cfg.engine_options(), cfg.q_max, cfg.resolved_grid_n());
    for (const auto& st : tower) {
        DiagnosticsPlan plan = default_plan(cfg, *st);
        LevelDiagnostics d = diagnose_level(*st, plan, cfg);
        int L = st->level();
        double t = plan.stress_times.front();
        auto name = [&](const char* f) { return "level" + std::to_string(L) + "_" + f + ".sfld"; };
        write_sfld1(dir + "/" + name("v"), make_dump(st->velocity(t), t));
        write_sfld1(dir + "/" + name("w"), make_dump(st->wave(t), t));
        write_sfld1(dir + "/" + name("R"), make_dump(st->stress(t), t));
        dumps.push_back({name("v"), "v", L});
        dumps.push_back({name("w"), "w", L});
        dumps.push_back({name("R"), "R", L});
        for (const auto& a : d.assertions)
            if (!a.pass) res.failed_assertions.push_back("q=" + std::to_string(d.q) + ": " + a.name);
        char line[256];
        std::snprintf(line, sizeof line,
                      "step q=%d lambda=%g n=%d  ratios w=%.3g v=%.3g R=%.3g Dv=%.3g DR=%.3g  residual=%.3g "
                      "budget=%.3g  %s (%.1f s)",
                      d.q, d.lambda, d.grid_n, d.ratio_w, d.ratio_v, d.ratio_stress, d.ratio_dt_v, d.ratio_dt_stress,
                      d.residual.residual, d.residual.budget(), d.passed() ? "ok" : "ASSERTION FAILED", d.seconds);
        log(line);
        res.levels.push_back(std::move(d));
    }
    write_run_artifacts(dir, cfg, res.levels, dumps);
    res.summary_path = emit_report(dir);
    for (const auto& f : res.failed_assertions) log("failed assertion " + f);
    res.exit_code = res.failed_assertions.empty() ? kExitPass : kExitAssertion;
    return res;
}

VerifyResult run_verify(const RunConfig& cfg, const std::vector<std::string>& only, const Logger& log) {
    set_serial(cfg.serial);
    VerifyResult r;
    const auto& names = only.empty() ? property_suites() : only;
    for (const auto& s : names) {
        SuiteResult sr = run_suite(s, cfg);
        for (const auto& p : sr.properties) {
            char line[320];
            std::snprintf(line, sizeof line, "%-4s %s.%s  value=%.3e %s %.3e", p.pass ? "ok" : "FAIL", p.suite.c_str(),
                          p.name.c_str(), p.value, p.upper ? "<=" : ">=", p.threshold);
            log(line);
            if (!p.pass) ++r.failed;
        }
        r.suites.push_back(std::move(sr));
    }
    write_verify_report(cfg.out_dir, cfg, r.suites);
    return r;
}

OracleResult run_oracle(const RunConfig& cfg, const Logger& log) {
    validate(cfg);
    set_serial(cfg.serial);
    const auto& o = cfg.oracle;
    TorusGrid g(o.n);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    ScalarField th(g, true);
    int R = int(o.radius);
    for (int k1 = 0; k1 <= R; ++k1)
        for (int k2 = -R; k2 <= R; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            if (std::hypot(k1, k2) > o.radius) continue;
            cplx c(N(rng), N(rng));
            th.coeff_ref(k1, k2) = c;
            th.coeff_ref(-k1, -k2) = std::conj(c);
        }
    double mx = c_norm(th, 0);
    if (mx > 0.0) th *= o.amplitude / mx;
    Trajectory tr = integrate_sqg(th, cfg.solver_config());
    ConservationReport rep = conservation_report(tr, o.gamma);
    OracleResult res;
    res.hamiltonian_drift = rep.hamiltonian_drift;
    res.l2_drift = rep.l2_drift;
    if (o.gamma > 0.0) res.passed = rep.strict_hamiltonian_decrease || o.amplitude == 0.0;
    else res.passed = std::max(rep.hamiltonian_drift, rep.l2_drift) <= cfg.tolerance("solver.drift");
    write_trajectory(tr, cfg.out_dir, "theta");
    write_oracle_report(cfg.out_dir, cfg, tr, rep, res.passed);
    char line[256];
    std::snprintf(line, sizeof line, "oracle n=%d steps=%d max_cfl=%.3g  H drift=%.3e  L2 drift=%.3e  %s", o.n,
                  tr.steps, tr.max_cfl, rep.hamiltonian_drift, rep.l2_drift, res.passed ? "ok" : "FAILED");
    log(line);
    res.exit_code = res.passed ? kExitPass : kExitAssertion;
    return res;
}

}  // namespace sqgci
