#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "sqgci/config.hpp"
#include "sqgci/harness.hpp"
#include "sqgci/io.hpp"
#include "sqgci/report.hpp"

using namespace sqgci;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
    auto p = (fs::temp_directory_path() / ("sqgci_test_" + name)).string();
    fs::remove_all(p);
    return p;
}

Logger quiet() {
    return [](const std::string&) {};
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(SQGCI_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config: sections, comments, overrides, canonical text") {
    RunConfig c = parse_config(
        "# comment\n[scheme]\nbeta = 0.7 ; inline\nq_max=1\n[profile]\nname = bump\n[tolerances]\nflow.shear = 1e-9\n");
    CHECK(c.scheme.beta == 0.7);
    CHECK(c.q_max == 1);
    CHECK(c.profile.name == "bump");
    CHECK(c.tolerance("flow.shear") == 1e-9);
    CHECK(c.tolerance("solver.drift") == 1e-8);
    apply_setting(c, "run.stress_samples=2");
    apply_tolerance(c, "solver.drift=1e-10");
    CHECK(c.stress_samples == 2);
    CHECK(c.tolerance("solver.drift") == 1e-10);
    RunConfig back = parse_config(to_text(c));
    CHECK(to_text(back) == to_text(c));
    CHECK_THROWS_AS(parse_config("[scheme]\nfoo = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("beta = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scheme]\nbeta = abc\n"), ConfigError);
    CHECK_THROWS_AS(apply_tolerance(c, "no.such=1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "beta=0.6"), ConfigError);
}

TEST_CASE("config: validation and resolution refusal") {
    RunConfig c = default_config();
    CHECK(c.resolved_grid_n() == 576);
    CHECK_NOTHROW(validate(c));
    RunConfig b = c;
    b.scheme.beta = 0.9;
    CHECK_THROWS_AS(validate(b), ConfigError);
    b = c;
    b.scheme.gamma = 1.5;  // >= 2 - beta
    CHECK_THROWS_AS(validate(b), ConfigError);
    b = c;
    b.scheme.lambda0 = 7;
    CHECK_THROWS_AS(validate(b), ConfigError);
    b = c;
    b.grid_n = 500;  // 4.5 * 125 = 562.5
    CHECK_THROWS_AS(validate(b), ResolutionError);
    b = c;
    b.q_max = 3;  // needs a 2816 grid
    CHECK_THROWS_AS(validate(b), ResolutionError);
    auto lv = derived_levels(c);
    REQUIRE(lv.size() == 4);
    CHECK(lv[1].lambda == 5.0);
    CHECK(lv[2].grid_n == 576);
    CHECK(lv[0].grid_n == 24);
}

TEST_CASE("report: missing artifacts are listed") {
    auto dir = temp_dir("empty");
    fs::create_directories(dir);
    try {
        emit_report(dir);
        FAIL("expected an artifact error");
    } catch (const ArtifactError& e) {
        std::string m = e.what();
        for (const auto& f : expected_run_files()) CHECK(m.find(f) != std::string::npos);
    }
    CHECK_THROWS_AS(reserialize_summary("{\"schema_version\": \"other\"}"), ArtifactError);
    CHECK_THROWS_AS(reserialize_summary("{"), ArtifactError);
    fs::remove_all(dir);
}

TEST_CASE("iterate: one step, summary round trip, determinism") {
    RunConfig c = default_config();
    c.q_max = 0;
    c.grid_n = 0;
    c.serial = true;
    c.ledger_samples = 9;
    c.stress_samples = 2;
    c.out_dir = temp_dir("iter_a");
    auto r = run_iterate(c, quiet());
    CHECK(r.exit_code == kExitPass);
    REQUIRE(r.levels.size() == 1);
    CHECK(r.levels[0].passed());
    CHECK(r.levels[0].ledger.size() == 9);
    std::string text = read_file(r.summary_path);
    CHECK(reserialize_summary(text) == text);
    CHECK(text.find("\"ratio_table\"") != std::string::npos);
    CHECK(text.find("\"epsilon_gamma\"") != std::string::npos);
    CHECK(text.find("\"tau_next\"") != std::string::npos);
    auto rows = read_csv(c.out_dir + "/ratios.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == 0.0);
    // emitting again reproduces the same bytes
    CHECK(read_file(emit_report(c.out_dir)) == text);
    // dumps decode with the level grid
    auto d = read_sfld1(c.out_dir + "/level1_w.sfld");
    CHECK(d.n == 24);
    CHECK(d.kind == FieldKind::Vector);

    RunConfig c2 = c;
    c2.out_dir = temp_dir("iter_b");
    run_iterate(c2, quiet());
    for (const auto& e : fs::directory_iterator(c.out_dir)) {
        auto name = e.path().filename().string();
        if (name == "timing.json" || name == "config.cfg") continue;  // wall times; output path
        INFO(name);
        CHECK(read_file(e.path().string()) == read_file(c2.out_dir + "/" + name));
    }
    // a missing dump is reported
    fs::remove(c2.out_dir + "/level1_R.sfld");
    CHECK_THROWS_AS(emit_report(c2.out_dir), ArtifactError);
    fs::remove_all(c.out_dir);
    fs::remove_all(c2.out_dir);
}

TEST_CASE("verify: report content and tolerance sensitivity") {
    RunConfig c = default_config();
    c.out_dir = temp_dir("verify");
    auto r = run_verify(c, {"beltrami", "io"}, quiet());
    CHECK(r.failed == 0);
    REQUIRE(r.suites.size() == 2);
    CHECK(fs::exists(c.out_dir + "/verify.json"));
    auto again = run_verify(c, {"beltrami"}, quiet());
    CHECK(again.suites[0].properties[0].value == r.suites[0].properties[0].value);
    // tightening the quadrature-limited tolerances 100x makes them fail
    RunConfig t = c;
    for (auto& [k, v] : t.tolerances) v /= 100.0;
    auto tight = run_verify(t, {"beltrami", "flow"}, quiet());
    CHECK(tight.failed >= 2);
    fs::remove_all(c.out_dir);
}

TEST_CASE("oracle: conservation and trajectory files") {
    RunConfig c = default_config();
    c.oracle.n = 32;
    c.oracle.radius = 5;
    c.oracle.t_end = 0.2;
    c.oracle.record_every = 50;
    c.out_dir = temp_dir("oracle");
    auto r = run_oracle(c, quiet());
    CHECK(r.passed);
    CHECK(r.hamiltonian_drift <= 1e-8);
    CHECK(fs::exists(c.out_dir + "/theta.csv"));
    CHECK(fs::exists(c.out_dir + "/theta_00004.sfld"));
    CHECK(fs::exists(c.out_dir + "/oracle.json"));
    fs::remove_all(c.out_dir);
}

TEST_CASE("command line: exit codes") {
    auto dir = temp_dir("cli");
    CHECK(run_cli("iterate --set scheme.beta=0.9 --out " + dir) == kExitConfig);
    CHECK(run_cli("iterate --set grid.n=500 --out " + dir) == kExitResolution);
    CHECK(run_cli("iterate --tol bogus=1 --out " + dir) == kExitConfig);
    CHECK(run_cli("frobnicate") == kExitConfig);
    fs::create_directories(dir + "/empty");
    CHECK(run_cli("report " + dir + "/empty") == kExitConfig);
    CHECK(run_cli("iterate --set scheme.q_max=0 --set run.ledger_samples=3 --set run.stress_samples=1 --serial --out " +
                  dir + "/run") == kExitPass);
    CHECK(run_cli("report " + dir + "/run") == kExitPass);
    CHECK(run_cli("verify --suite io --out " + dir + "/verify") == kExitPass);
    CHECK(run_cli("oracle --set oracle.n=16 --set oracle.radius=3 --set oracle.t_end=0.01 --out " + dir + "/oracle") ==
          kExitPass);
    fs::remove_all(dir);
}
