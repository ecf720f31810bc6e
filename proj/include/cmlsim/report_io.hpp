#pragma once

#include "cmlsim/sim.hpp"

#include <filesystem>
#include <string>

#include "json.hpp"

namespace cmlsim::report_io {

// Report JSON with the report's field names; drain_time_days maps each
// malicious agent to days-to-zero or null.
nlohmann::json report_to_json(const sim::SimulationReport& report);

// Snapshot rows under the header
// `t_seconds,t_days,accuracy_pct,balance_<agent-id>...,pool,burned`.
std::string timeline_csv(const sim::SimulationReport& report);

// Formats a sweep value the way sweep.csv and per-value file names spell it.
std::string format_value(double value);

void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace cmlsim::report_io
