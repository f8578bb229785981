#include "sqgci/report.hpp"

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "sqgci/io.hpp"

namespace sqgci {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

json config_json(const RunConfig& c) {
    json j;
    j["scheme"] = {{"lambda0", c.scheme.lambda0}, {"beta", c.scheme.beta}, {"gamma", c.scheme.gamma},
                   {"q_max", c.q_max}};
    j["grid"] = {{"n", c.resolved_grid_n()},
                 {"time_samples_per_tau", c.time_samples_per_tau},
                 {"max_n", c.max_grid_n}};
    j["profile"] = {{"name", c.profile.name}, {"amplitude", c.profile.amplitude}, {"t0", c.profile.t0},
                    {"t1", c.profile.t1}};
    j["run"] = {{"seed", c.seed},
                {"serial", c.serial},
                {"stress_samples", c.stress_samples},
                {"ledger_samples", c.ledger_samples},
                {"strict_guard", c.strict_guard},
                {"guard_margin", c.guard_margin},
                {"fd_fraction", c.fd_fraction}};
    j["oracle"] = {{"n", c.oracle.n},         {"dt", c.oracle.dt},
                   {"t_end", c.oracle.t_end}, {"gamma", c.oracle.gamma},
                   {"radius", c.oracle.radius}, {"amplitude", c.oracle.amplitude},
                   {"record_every", c.oracle.record_every}};
    json tol = json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    j["tolerances"] = tol;
    return j;
}

json derived_json(const RunConfig& c) {
    json levels = json::array();
    for (const auto& l : derived_levels(c))
        levels.push_back({{"q", l.q}, {"lambda", l.lambda}, {"delta", l.delta}, {"tau_next", l.tau_next},
                          {"grid_n", l.grid_n}});
    return {{"epsilon_gamma", c.scheme.epsilon_gamma()},
            {"epsilon_R", c.scheme.epsilon_R()},
            {"cfl_scale", c.scheme.cfl_scale()},
            {"levels", levels}};
}

json residual_json(const LevelDiagnostics& d) {
    const auto& r = d.residual;
    return {{"t", d.residual_time},
            {"residual", r.residual},
            {"div_stress", r.div_stress},
            {"budget", r.budget()},
            {"budget_fd", r.budget_fd},
            {"budget_quadrature", r.budget_quadrature},
            {"budget_interpolation", r.budget_interpolation},
            {"budget_inherited", r.budget_inherited},
            {"budget_roundoff", r.budget_roundoff}};
}

json ratios_json(const LevelDiagnostics& d) {
    return {{"w", d.ratio_w},
            {"v", d.ratio_v},
            {"stress", d.ratio_stress},
            {"dt_v", d.ratio_dt_v},
            {"dt_stress", d.ratio_dt_stress}};
}

json step_json(const LevelDiagnostics& d) {
    json samples = json::array();
    for (const auto& s : d.samples)
        samples.push_back({{"t", s.t},
                           {"w_c0", s.w_c0},
                           {"v_prev_c1", s.v_prev_c1},
                           {"stress_c0", s.stress_c0},
                           {"dt_v_prev", s.dt_v_prev},
                           {"dt_stress_prev", s.dt_stress_prev},
                           {"R_T", s.R_T},
                           {"R_N", s.R_N},
                           {"R_D", s.R_D},
                           {"R_O", s.R_O},
                           {"R_O_low", s.diag.low},
                           {"R_O_commutator", s.diag.commutator},
                           {"R_O_high", s.diag.high},
                           {"high_leakage", s.diag.high_leakage},
                           {"quadrature", s.diag.quadrature},
                           {"principal_residual", s.diag.principal_residual},
                           {"approx_stress", s.diag.approx},
                           {"saturation_leftover", s.diag.saturation_leftover},
                           {"gamma_min", s.diag.gamma_min},
                           {"guard_ratio", s.guard_ratio},
                           {"saturation", s.saturation},
                           {"rho_max", s.rho_max}});
    json ledger = json::array();
    for (const auto& s : d.ledger)
        ledger.push_back({{"t", s.t},
                          {"H", s.H},
                          {"energy_prev", s.energy_prev},
                          {"energy", s.energy},
                          {"gap", s.gap},
                          {"scale", s.scale},
                          {"gap_over_scale", s.gap / s.scale},
                          {"rho_positive", s.rho_positive},
                          {"rho_zero", s.rho_zero}});
    json asserts = json::array();
    for (const auto& a : d.assertions)
        asserts.push_back({{"name", a.name}, {"value", a.value}, {"threshold", a.threshold}, {"pass", a.pass}});
    return {{"q", d.q},
            {"level", d.q + 1},
            {"lambda", d.lambda},
            {"delta", d.delta},
            {"tau", d.tau},
            {"grid_n", d.grid_n},
            {"ratios", ratios_json(d)},
            {"residual", residual_json(d)},
            {"stress_samples", samples},
            {"energy_ledger",
             {{"relaxed_band", {0.1, 0.9}},
              {"exact_band", {0.25, 0.75}},
              {"in_relaxed_band", d.ledger_in_band(0.1, 0.9)},
              {"in_exact_band", d.ledger_in_band(0.25, 0.75)},
              {"min_gap", d.ledger_min_gap()},
              {"samples", ledger}}},
            {"assertions", asserts},
            {"passed", d.passed()}};
}

std::string dump_text(const json& j) { return j.dump(2) + "\n"; }

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ArtifactError(path + ": malformed JSON (" + e.what() + ")");
    }
}

const std::vector<std::string>& ratio_columns() {
    static const std::vector<std::string> c = {"q",         "ratio_w",  "ratio_v", "ratio_stress",
                                               "ratio_dt_v", "ratio_dt_stress", "residual", "budget"};
    return c;
}

}  // namespace

const std::vector<std::string>& expected_run_files() {
    static const std::vector<std::string> f = {"config.cfg", "run.json", "ratios.csv", "energy_ledger.csv",
                                               "stress_samples.csv"};
    return f;
}

void write_run_artifacts(const std::string& dir, const RunConfig& cfg, const std::vector<LevelDiagnostics>& levels,
                         const std::vector<DumpRecord>& dumps) {
    fs::create_directories(dir);
    write_file(dir + "/config.cfg", to_text(cfg));

    std::vector<std::vector<double>> ratios, ledger, samples;
    for (const auto& d : levels) {
        ratios.push_back({double(d.q), d.ratio_w, d.ratio_v, d.ratio_stress, d.ratio_dt_v, d.ratio_dt_stress,
                          d.residual.residual, d.residual.budget()});
        for (const auto& s : d.ledger)
            ledger.push_back({double(d.q), s.t, s.H, s.energy_prev, s.energy, s.gap, s.gap / s.scale,
                              s.rho_positive ? 1.0 : 0.0, s.rho_zero ? 1.0 : 0.0});
        for (const auto& s : d.samples)
            samples.push_back({double(d.q), s.t, s.w_c0, s.v_prev_c1, s.stress_c0, s.R_T, s.R_N, s.R_D, s.R_O,
                               s.dt_v_prev, s.dt_stress_prev, s.guard_ratio, s.saturation, s.rho_max,
                               s.diag.gamma_min});
    }
    write_csv(dir + "/ratios.csv", ratio_columns(), ratios);
    write_csv(dir + "/energy_ledger.csv",
              {"q", "t", "H", "energy_prev", "energy", "gap", "gap_over_scale", "rho_positive", "rho_zero"}, ledger);
    write_csv(dir + "/stress_samples.csv",
              {"q", "t", "w_c0", "v_prev_c1", "stress_c0", "R_T", "R_N", "R_D", "R_O", "dt_v_prev", "dt_stress_prev",
               "guard_ratio", "saturation", "rho_max", "gamma_min"},
              samples);

    json run;
    run["schema_version"] = kSummarySchema;
    run["config"] = config_json(cfg);
    run["derived"] = derived_json(cfg);
    json steps = json::array();
    bool passed = true;
    for (const auto& d : levels) {
        steps.push_back(step_json(d));
        passed = passed && d.passed();
    }
    run["steps"] = steps;
    json jd = json::array();
    for (const auto& d : dumps) jd.push_back({{"file", d.file}, {"field", d.field}, {"level", d.level}});
    run["dumps"] = jd;
    run["passed"] = passed;
    write_file(dir + "/run.json", dump_text(run));

    json timing;
    json per = json::array();
    for (const auto& d : levels) per.push_back({{"q", d.q}, {"seconds", d.seconds}});
    timing["steps"] = per;
    write_file(dir + "/timing.json", dump_text(timing));
}

std::string emit_report(const std::string& dir) {
    std::vector<std::string> missing;
    for (const auto& f : expected_run_files())
        if (!fs::exists(dir + "/" + f)) missing.push_back(f);
    auto listing = [&] {
        std::string s;
        for (const auto& f : expected_run_files()) s += "\n  " + f;
        s += "\n  level<L>_{v,w,R}.sfld (one set per step)";
        return s;
    };
    if (!missing.empty()) {
        std::string m;
        for (const auto& f : missing) m += (m.empty() ? "" : ", ") + f;
        throw ArtifactError("run directory '" + dir + "' is missing " + m + "; expected files:" + listing());
    }
    json run = parse_json_file(dir + "/run.json");
    if (!run.contains("schema_version") || run["schema_version"] != kSummarySchema)
        throw ArtifactError(dir + "/run.json: schema version mismatch (expected " + std::string(kSummarySchema) + ")");

    // dumps: present, and headers consistent with the record
    json dumps = json::array();
    for (const auto& d : run.at("dumps")) {
        std::string file = d.at("file").get<std::string>();
        std::string path = dir + "/" + file;
        if (!fs::exists(path)) throw ArtifactError("run directory '" + dir + "' is missing dump " + file + "; expected files:" + listing());
        FieldDump fd;
        try {
            fd = read_sfld1(path);
        } catch (const std::exception& e) {
            throw ArtifactError(path + ": " + e.what());
        }
        int level = d.at("level").get<int>();
        int n_expect = run.at("steps").at(level - 1).at("grid_n").get<int>();
        if (fd.n != n_expect) throw ArtifactError(path + ": grid size disagrees with the step record");
        json e = d;
        e["n"] = fd.n;
        e["kind"] = to_string(fd.kind);
        e["t"] = fd.t;
        dumps.push_back(e);
    }

    std::vector<std::string> header;
    auto rows = read_csv(dir + "/ratios.csv", &header);
    if (header != ratio_columns()) throw ArtifactError(dir + "/ratios.csv: unexpected columns");
    json table_rows = json::array();
    for (const auto& r : rows) table_rows.push_back(r);

    json summary = run;
    summary["dumps"] = dumps;
    summary["ratio_table"] = {{"columns", ratio_columns()}, {"rows", table_rows}};
    summary["csv"] = {"ratios.csv", "energy_ledger.csv", "stress_samples.csv"};
    std::string out = dir + "/summary.json";
    write_file(out, dump_text(summary));
    return out;
}

std::string reserialize_summary(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ArtifactError(std::string("summary: malformed JSON (") + e.what() + ")");
    }
    if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != kSummarySchema)
        throw ArtifactError("summary: schema version mismatch (expected " + std::string(kSummarySchema) + ")");
    return dump_text(j);
}

void write_verify_report(const std::string& dir, const RunConfig& cfg, const std::vector<SuiteResult>& suites) {
    fs::create_directories(dir);
    json props = json::array();
    int pass = 0, fail = 0;
    for (const auto& s : suites)
        for (const auto& p : s.properties) {
            props.push_back({{"suite", p.suite},
                             {"name", p.name},
                             {"tolerance_key", p.tolerance_key},
                             {"value", p.value},
                             {"threshold", p.threshold},
                             {"comparison", p.upper ? "<=" : ">="},
                             {"pass", p.pass},
                             {"detail", p.detail}});
            (p.pass ? pass : fail)++;
        }
    json j;
    j["schema_version"] = kVerifySchema;
    j["config"] = config_json(cfg);
    j["derived"] = derived_json(cfg);
    j["properties"] = props;
    j["passed"] = pass;
    j["failed"] = fail;
    write_file(dir + "/verify.json", dump_text(j));
}

void write_oracle_report(const std::string& dir, const RunConfig& cfg, const Trajectory& tr,
                         const ConservationReport& rep, bool passed) {
    fs::create_directories(dir);
    json j;
    j["schema_version"] = kOracleSchema;
    j["config"] = config_json(cfg);
    j["derived"] = derived_json(cfg);
    j["steps"] = tr.steps;
    j["max_cfl"] = tr.max_cfl;
    j["conservation"] = {{"hamiltonian_drift", rep.hamiltonian_drift},
                         {"l2_drift", rep.l2_drift},
                         {"l4_drift", rep.l4_drift},
                         {"monotone_hamiltonian", rep.monotone_hamiltonian},
                         {"monotone_l2", rep.monotone_l2},
                         {"strict_hamiltonian_decrease", rep.strict_hamiltonian_decrease}};
    j["trajectory"] = {{"csv", "theta.csv"}, {"dumps", tr.states.size()}};
    j["passed"] = passed;
    write_file(dir + "/oracle.json", dump_text(j));
}

}  // namespace sqgci
