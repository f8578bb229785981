#pragma once
// Registry of the module invariant suites. Each property measures one number
// against an independent oracle and compares it with a threshold (a tolerance
// key from the run configuration, or a fixed bound). Random inputs are drawn
// from the configured seed; the pass set does not depend on the seed.

#include <string>
#include <vector>

#include "sqgci/config.hpp"

namespace sqgci {

struct PropertyResult {
    std::string suite, name;
    std::string tolerance_key;  // empty for fixed bounds
    double value = 0.0;
    double threshold = 0.0;
    bool upper = true;  // pass iff value <= threshold (otherwise value >= threshold)
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<PropertyResult> properties;
    double seconds = 0.0;  // wall time (not part of machine-readable reports)
    bool passed() const;
};

// suite names in execution order
const std::vector<std::string>& property_suites();
// throws ConfigError for an unknown suite
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);
std::vector<SuiteResult> run_all_suites(const RunConfig& cfg);

}  // namespace sqgci
