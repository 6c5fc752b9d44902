#pragma once

// Scenario runner: reproduces the p = 2 boundary example, drives the
// randomized property suites, and emits machine-readable verdicts.

#include "pvg/errors.hpp"
#include "pvg/report.hpp"

namespace pvg {

// Built-in scenario names (property suites plus the explicit example).
const std::vector<std::string>& scenario_catalogue();

// Dispatch by config.scenario; throws UnknownScenario / UnknownSuite for
// names outside the catalogue and ConfigInvalid for bad parameters.
Report run_scenario(const ScenarioConfig& config);

// The p = 2 Heisenberg boundary example: inversion passes the f-increase
// test and lands in Gamma(1), yet is not the identity on H/L.
Report reproduce_p2_example(uint32_t precision, int64_t cutoff);

// One of: pval-axioms, tp-characterization, quotient-tp, orbit-invariance,
// w-valuation, theorem-2-5, f-increase-gamma1, lucas-oracle, group-oracle.
Report property_suite(const std::string& name, const ScenarioConfig& config);

// 0 when every check passed, 1 otherwise (2 is the CLI's config-error code).
int exit_code(const Report& report);

}  // namespace pvg
