#include "sqgci/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sqgci/io.hpp"

namespace sqgci {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
    long long x = parse_int(key, v);
    if (x < -2147483647LL || x > 2147483647LL) throw ConfigError("config: '" + key + "' out of range");
    return int(x);
}

// sets section.key; returns false when the key is unknown
bool set_key(RunConfig& c, const std::string& section, const std::string& key, const std::string& v) {
    const std::string full = section + "." + key;
    if (section == "scheme") {
        if (key == "lambda0") c.scheme.lambda0 = parse_double(full, v);
        else if (key == "beta") c.scheme.beta = parse_double(full, v);
        else if (key == "gamma") c.scheme.gamma = parse_double(full, v);
        else if (key == "q_max") c.q_max = to_int(full, v);
        else return false;
    } else if (section == "grid") {
        if (key == "n") c.grid_n = to_int(full, v);
        else if (key == "time_samples_per_tau") c.time_samples_per_tau = to_int(full, v);
        else if (key == "max_n") c.max_grid_n = to_int(full, v);
        else return false;
    } else if (section == "profile") {
        if (key == "name") c.profile.name = v;
        else if (key == "amplitude") c.profile.amplitude = parse_double(full, v);
        else if (key == "t0") c.profile.t0 = parse_double(full, v);
        else if (key == "t1") c.profile.t1 = parse_double(full, v);
        else return false;
    } else if (section == "run") {
        if (key == "seed") {
            long long s = parse_int(full, v);
            if (s < 0) throw ConfigError("config: run.seed must be nonnegative");
            c.seed = std::uint64_t(s);
        } else if (key == "serial") c.serial = parse_bool(full, v);
        else if (key == "out") c.out_dir = v;
        else if (key == "stress_samples") c.stress_samples = to_int(full, v);
        else if (key == "ledger_samples") c.ledger_samples = to_int(full, v);
        else if (key == "strict_guard") c.strict_guard = parse_bool(full, v);
        else if (key == "guard_margin") c.guard_margin = parse_double(full, v);
        else if (key == "fd_fraction") c.fd_fraction = parse_double(full, v);
        else return false;
    } else if (section == "oracle") {
        if (key == "n") c.oracle.n = to_int(full, v);
        else if (key == "dt") c.oracle.dt = parse_double(full, v);
        else if (key == "t_end") c.oracle.t_end = parse_double(full, v);
        else if (key == "gamma") c.oracle.gamma = parse_double(full, v);
        else if (key == "radius") c.oracle.radius = parse_double(full, v);
        else if (key == "amplitude") c.oracle.amplitude = parse_double(full, v);
        else if (key == "record_every") c.oracle.record_every = to_int(full, v);
        else return false;
    } else if (section == "tolerances") {
        if (!default_tolerances().count(key)) return false;
        double x = parse_double(full, v);
        if (!(x >= 0.0)) throw ConfigError("config: tolerance '" + key + "' must be nonnegative");
        c.tolerances[key] = x;
    } else {
        throw ConfigError("config: unknown section [" + section + "]");
    }
    return true;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"operators.lambda_composition", 1e-11},
        {"operators.leray_idempotence", 1e-11},
        {"operators.div_inverse_divergence", 1e-11},
        {"operators.beltrami_eigenrelation", 1e-11},
        {"operators.magic_identity", 1e-11},
        {"geometry.gamma_identity", 1e-12},
        {"geometry.reconstruction", 1e-12},
        {"pseudo.mirror_symbol", 0.0},
        {"pseudo.decomposition", 1e-8},
        {"beltrami.divergence_form", 1e-12},
        {"beltrami.zero_mode", 1e-12},
        {"flow.shear", 1e-8},
        {"flow.jacobian_drift", 1e-6},
        {"flow.partition_of_unity", 1e-12},
        {"engine.principal_cancellation", 1e-9},
        {"engine.support", 1e-12},
        {"engine.divergence_free", 1e-12},
        {"engine.hamiltonian_additivity", 1e-12},
        {"engine.energy_identity", 1e-12},
        {"engine.budget_relative", 1e-4},
        {"solver.plane_wave", 1e-12},
        {"solver.drift", 1e-8},
        {"solver.weak_form", 1e-8},
        {"io.roundtrip", 0.0},
    };
    return t;
}

RunConfig default_config() {
    RunConfig c;
    c.tolerances = default_tolerances();
    return c;
}

int RunConfig::resolved_grid_n() const {
    return grid_n > 0 ? grid_n : level_grid_size(scheme.lambda(q_max + 1));
}

double RunConfig::tolerance(const std::string& key) const {
    auto it = tolerances.find(key);
    if (it != tolerances.end()) return it->second;
    auto d = default_tolerances().find(key);
    if (d == default_tolerances().end()) throw ConfigError("unknown tolerance key '" + key + "'");
    return d->second;
}

EngineOptions RunConfig::engine_options() const {
    EngineOptions o;
    o.fd_fraction = fd_fraction;
    o.strict_guard = strict_guard;
    o.guard_margin = guard_margin;
    return o;
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    s.n = oracle.n;
    s.dt = oracle.dt;
    s.gamma = oracle.gamma;
    s.t_end = oracle.t_end;
    s.record_every = oracle.record_every;
    return s;
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
    RunConfig c = base;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.resize(cut);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = "config line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"scheme", "grid", "profile", "run", "oracle", "tolerances"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of a section");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        try {
            if (!set_key(c, section, key, value))
                throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return parse_config(s.str(), base);
}

void apply_setting(RunConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("setting '" + assignment + "' must look like section.key=value");
    std::string section = trim(assignment.substr(0, dot)), key = trim(assignment.substr(dot + 1, eq - dot - 1));
    if (!set_key(cfg, section, key, trim(assignment.substr(eq + 1))))
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
}

void apply_tolerance(RunConfig& cfg, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("tolerance override '" + assignment + "' must look like KEY=VAL");
    std::string key = trim(assignment.substr(0, eq));
    if (!set_key(cfg, "tolerances", key, trim(assignment.substr(eq + 1))))
        throw ConfigError("unknown tolerance key '" + key + "'");
}

void validate(const RunConfig& c) {
    c.scheme.validate();
    c.profile.validate();
    if (c.q_max < 0) throw ConfigError("scheme.q_max must be >= 0");
    if (c.time_samples_per_tau < 2) throw ConfigError("grid.time_samples_per_tau must be >= 2");
    if (c.stress_samples < 1) throw ConfigError("run.stress_samples must be >= 1");
    if (c.ledger_samples < 0) throw ConfigError("run.ledger_samples must be >= 0");
    if (!(c.guard_margin > 0.0 && c.guard_margin <= 1.0)) throw ConfigError("run.guard_margin must lie in (0, 1]");
    if (!(c.fd_fraction > 0.0 && c.fd_fraction <= 0.05)) throw ConfigError("run.fd_fraction must lie in (0, 0.05]");
    if (c.oracle.n < 8 || c.oracle.n % 2) throw ConfigError("oracle.n must be even and >= 8");
    if (!(c.oracle.dt > 0.0) || !(c.oracle.t_end >= 0.0)) throw ConfigError("oracle.dt must be > 0, t_end >= 0");
    if (!(c.oracle.gamma >= 0.0 && c.oracle.gamma <= 2.0)) throw ConfigError("oracle.gamma must lie in [0, 2]");
    if (!(c.oracle.radius >= 1.0) || 2.0 * c.oracle.radius >= c.oracle.n / 2.0)
        throw ConfigError("oracle.radius must lie in [1, n/4)");
    if (!(c.oracle.amplitude >= 0.0)) throw ConfigError("oracle.amplitude must be >= 0");
    if (c.oracle.record_every < 1) throw ConfigError("oracle.record_every must be >= 1");
    for (const auto& [k, v] : c.tolerances)
        if (!default_tolerances().count(k)) throw ConfigError("unknown tolerance key '" + k + "'");
    double lam = c.scheme.lambda(c.q_max + 1);
    int n = c.resolved_grid_n();
    if (n % 2) throw ConfigError("grid.n must be even");
    if (!(n > 4.5 * lam))
        throw ResolutionError("grid.n = " + std::to_string(n) + " cannot hold level " + std::to_string(c.q_max + 1) +
                              " exactly: products of the new perturbation need n > 4.5 lambda = " +
                              format_double(4.5 * lam) + " (smallest admissible: " +
                              std::to_string(level_grid_size(lam)) + ")");
    if (n > c.max_grid_n)
        throw ResolutionError("grid.n = " + std::to_string(n) + " exceeds the resource ceiling grid.max_n = " +
                              std::to_string(c.max_grid_n));
}

std::string to_text(const RunConfig& c) {
    std::ostringstream o;
    auto d = [](double x) { return format_double(x); };
    o << "[scheme]\nlambda0 = " << d(c.scheme.lambda0) << "\nbeta = " << d(c.scheme.beta)
      << "\ngamma = " << d(c.scheme.gamma) << "\nq_max = " << c.q_max << "\n\n";
    o << "[grid]\nn = " << c.grid_n << "\ntime_samples_per_tau = " << c.time_samples_per_tau
      << "\nmax_n = " << c.max_grid_n << "\n\n";
    o << "[profile]\nname = " << c.profile.name << "\namplitude = " << d(c.profile.amplitude)
      << "\nt0 = " << d(c.profile.t0) << "\nt1 = " << d(c.profile.t1) << "\n\n";
    o << "[run]\nseed = " << c.seed << "\nserial = " << (c.serial ? "true" : "false") << "\nout = " << c.out_dir
      << "\nstress_samples = " << c.stress_samples << "\nledger_samples = " << c.ledger_samples
      << "\nstrict_guard = " << (c.strict_guard ? "true" : "false") << "\nguard_margin = " << d(c.guard_margin)
      << "\nfd_fraction = " << d(c.fd_fraction) << "\n\n";
    o << "[oracle]\nn = " << c.oracle.n << "\ndt = " << d(c.oracle.dt) << "\nt_end = " << d(c.oracle.t_end)
      << "\ngamma = " << d(c.oracle.gamma) << "\nradius = " << d(c.oracle.radius)
      << "\namplitude = " << d(c.oracle.amplitude) << "\nrecord_every = " << c.oracle.record_every << "\n\n";
    o << "[tolerances]\n";
    for (const auto& [k, v] : c.tolerances) o << k << " = " << d(v) << "\n";
    return o.str();
}

std::vector<DerivedLevel> derived_levels(const RunConfig& c) {
    std::vector<DerivedLevel> out;
    for (int q = 0; q <= c.q_max + 1; ++q) {
        DerivedLevel l;
        l.q = q;
        l.lambda = c.scheme.lambda(q);
        l.delta = c.scheme.delta(q);
        l.tau_next = c.scheme.tau_next(q);
        l.grid_n = q == c.q_max ? c.resolved_grid_n() : (q < c.q_max ? level_grid_size(c.scheme.lambda(q + 1)) : 0);
        out.push_back(l);
    }
    return out;
}

}  // namespace sqgci
