// sqgci: command-line front end (iterate / verify / oracle / report).
//
// Exit codes: 0 pass, 2 configuration error, 3 assertion failure,
// 4 resource or resolution refusal.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqgci/harness.hpp"
#include "sqgci/report.hpp"

namespace {

struct CommonOptions {
    std::string config, out;
    bool serial = false;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> tol, set;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config, "configuration file (key = value with [sections])");
    app->add_option("--out", o.out, "output directory (overrides run.out)");
    app->add_flag("--serial", o.serial, "serial execution (bit-reproducible reductions)");
    app->add_option("--seed", o.seed, "seed for randomized property suites and oracle initial data");
    app->add_option("--tol", o.tol, "tolerance override KEY=VAL (repeatable)")->take_all();
    app->add_option("--set", o.set, "configuration override section.key=value (repeatable)")->take_all();
}

sqgci::RunConfig resolve(const CommonOptions& o, const std::string& mode) {
    sqgci::RunConfig cfg = sqgci::default_config();
    if (!o.config.empty()) cfg = sqgci::load_config(o.config, cfg);
    for (const auto& s : o.set) sqgci::apply_setting(cfg, s);
    for (const auto& t : o.tol) sqgci::apply_tolerance(cfg, t);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.serial) cfg.serial = true;
    if (o.seed) cfg.seed = *o.seed;
    cfg.mode = mode;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral convex-integration engine for the SQG momentum equation"};
    app.require_subcommand(1);
    CommonOptions iter_o, ver_o, orc_o;
    std::vector<std::string> suites;
    std::string report_dir;

    auto* iterate = app.add_subcommand("iterate", "run the iteration q = 0..q_max and write the run artifacts");
    add_common(iterate, iter_o);
    auto* verify = app.add_subcommand("verify", "run the property suites and write verify.json");
    add_common(verify, ver_o);
    verify->add_option("--suite", suites, "run only these suites (repeatable)")->take_all();
    auto* oracle = app.add_subcommand("oracle", "run the reference SQG solver and write its trajectory");
    add_common(oracle, orc_o);
    auto* report = app.add_subcommand("report", "emit summary.json from an iterate run directory");
    report->add_option("--out,dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : sqgci::kExitConfig;
    }

    try {
        if (*iterate) {
            auto cfg = resolve(iter_o, "iterate");
            auto r = sqgci::run_iterate(cfg);
            std::printf("summary: %s\n", r.summary_path.c_str());
            return r.exit_code;
        }
        if (*verify) {
            auto cfg = resolve(ver_o, "verify");
            auto r = sqgci::run_verify(cfg, suites);
            std::printf("%d propert%s failed; report: %s/verify.json\n", r.failed, r.failed == 1 ? "y" : "ies",
                        cfg.out_dir.c_str());
            return sqgci::kExitPass;
        }
        if (*oracle) {
            auto cfg = resolve(orc_o, "oracle");
            return sqgci::run_oracle(cfg).exit_code;
        }
        if (*report) {
            std::printf("summary: %s\n", sqgci::emit_report(report_dir).c_str());
            return sqgci::kExitPass;
        }
    } catch (const sqgci::ArtifactError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return sqgci::kExitConfig;
    } catch (const std::exception& e) {
        int code = sqgci::exit_code_for(e);
        const char* kind = code == sqgci::kExitConfig       ? "configuration error"
                           : code == sqgci::kExitResolution ? "resolution refused"
                                                            : "assertion failure";
        std::fprintf(stderr, "%s: %s\n", kind, e.what());
        return code;
    }
    return sqgci::kExitPass;
}
