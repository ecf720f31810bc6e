#include "cmlsim/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cmlsim::report_io {

namespace {

std::string fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

} // namespace

nlohmann::json report_to_json(const sim::SimulationReport& report) {
    nlohmann::json snapshots = nlohmann::json::array();
    for (const sim::Snapshot& snap : report.snapshots) {
        snapshots.push_back({{"t", snap.t},
                             {"accuracy", snap.accuracy},
                             {"balances", snap.balances},
                             {"pool", snap.pool}});
    }
    nlohmann::json drains = nlohmann::json::object();
    for (const AgentId& agent : report.malicious_agents) {
        const auto days = sim::time_to_drain(report, agent);
        drains[agent] = days ? nlohmann::json(*days) : nlohmann::json(nullptr);
    }
    return {{"snapshots", snapshots},
            {"final_accuracy", report.final_accuracy},
            {"accuracy_all", report.accuracy_all},
            {"gap", report.gap},
            {"drain_time_days", drains},
            {"events_processed", report.events_processed}};
}

std::string timeline_csv(const sim::SimulationReport& report) {
    std::ostringstream out;
    out << "t_seconds,t_days,accuracy_pct";
    for (const AgentId& agent : report.agent_order) {
        out << ",balance_" << agent;
    }
    out << ",pool,burned\n";
    for (const sim::Snapshot& snap : report.snapshots) {
        out << snap.t << ','
            << fixed6(static_cast<double>(snap.t) / static_cast<double>(kSecondsPerDay)) << ','
            << fixed6(snap.accuracy);
        for (const AgentId& agent : report.agent_order) {
            out << ',' << snap.balances.at(agent);
        }
        out << ',' << snap.pool << ',' << snap.burned << '\n';
    }
    return out.str();
}

std::string format_value(double value) {
    // integers print bare, everything else with %g (round-trips the sweep
    // grids used in practice: 0.01, 0.08, 5, 100, ...)
    if (value == static_cast<double>(static_cast<long long>(value))) {
        return std::to_string(static_cast<long long>(value));
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
}

} // namespace cmlsim::report_io
