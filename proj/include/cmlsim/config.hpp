#pragma once

#include "cmlsim/sim.hpp"

#include <filesystem>
#include <string>

namespace cmlsim::config {

// Scenario file format: one `key = value` pair per line, `#` comments.
// Global keys use the parameter names of the incentive mechanism verbatim
// (num_words, train_size, submission_cost, ...); per-agent keys are
// namespaced as `agent.<id>.<key>`. Token-denominated keys (start_balance,
// mean_deposit, stdev_deposit, base_min_deposit) are scaled to minor units
// on load; submission_cost is already a minor-unit value.
sim::ScenarioConfig load_scenario_file(const std::filesystem::path& path);

// Applies one sweep value at a dotted parameter path (`num_words`,
// `contract.submission_cost`, `agents[0].mean_deposit`, ...). Values use
// the same units as the config file. Throws
// std::runtime_error("unknown parameter <path>") for unresolvable paths.
void apply_parameter(sim::ScenarioConfig& config, const std::string& path, double value);

} // namespace cmlsim::config
