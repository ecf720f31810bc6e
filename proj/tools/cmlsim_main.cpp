// Command-line front end: single runs, clean-data baselines, and
// one-parameter sweeps written out as CSV/JSON for external plotting.

#include "cmlsim/config.hpp"
#include "cmlsim/report_io.hpp"
#include "cmlsim/sim.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cmlsim;

std::string summary_line(const sim::SimulationReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "accuracy_pct=" << report.final_accuracy << " gap_pp=" << report.gap;
    for (const AgentId& agent : report.malicious_agents) {
        const auto days = sim::time_to_drain(report, agent);
        out << " drain_days[" << agent << "]=";
        if (days) {
            out << *days;
        } else {
            out << "never";
        }
    }
    return out.str();
}

void write_run_outputs(const fs::path& out_dir, const std::string& timeline_name,
                       const sim::SimulationReport& report, bool with_json) {
    fs::create_directories(out_dir);
    if (with_json) {
        report_io::write_file(out_dir / "report.json",
                              report_io::report_to_json(report).dump(2) + "\n");
    }
    report_io::write_file(out_dir / timeline_name, report_io::timeline_csv(report));
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override) {
    sim::ScenarioConfig config = config::load_scenario_file(config_path);
    if (seed_override) {
        config.seed = *seed_override;
    }
    const sim::SimulationReport report = sim::run(config);
    write_run_outputs(out_dir, "timeline.csv", report, true);
    std::printf("%s\n", summary_line(report).c_str());
    return 0;
}

int cmd_baseline(const std::string& config_path) {
    const sim::ScenarioConfig config = config::load_scenario_file(config_path);
    std::printf("%.6f\n", sim::baseline_accuracy(config));
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir,
              unsigned jobs) {
    const sim::ScenarioConfig base = config::load_scenario_file(config_path);

    // Validate every point up front so a bad path fails before any run.
    for (double value : values) {
        sim::ScenarioConfig probe = base;
        config::apply_parameter(probe, param, value);
    }

    std::vector<sim::SimulationReport> reports(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    std::size_t next = 0;
    std::mutex pick;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(pick);
                if (next >= values.size()) {
                    return;
                }
                i = next++;
            }
            try {
                sim::ScenarioConfig point = base;
                config::apply_parameter(point, param, values[i]);
                reports[i] = sim::run(point);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, values.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }

    fs::create_directories(out_dir);
    std::ostringstream csv;
    csv << "value,accuracy_pct,accuracy_all_pct,gap_pct,drain_days\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const sim::SimulationReport& report = reports[i];
        const std::string value_text = report_io::format_value(values[i]);
        char row[256];
        std::string drain_text;
        for (const AgentId& agent : report.malicious_agents) {
            if (const auto days = sim::time_to_drain(report, agent)) {
                std::snprintf(row, sizeof(row), "%.6f", *days);
                drain_text = row;
                break; // first malicious agent carries the headline metric
            }
        }
        std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f,%s", value_text.c_str(),
                      report.final_accuracy, report.accuracy_all, report.gap,
                      drain_text.c_str());
        csv << row << '\n';
        write_run_outputs(out_dir, "timeline_" + value_text + ".csv", report, false);
    }
    report_io::write_file(fs::path(out_dir) / "sweep.csv", csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"staked data-sharing marketplace simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string param;
    std::vector<double> values;
    std::optional<std::uint64_t> seed_override;
    unsigned jobs = 1;

    CLI::App* run = app.add_subcommand("run", "run one simulation and write report.json + timeline.csv");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--seed", seed_override, "override the config seed");

    CLI::App* sweep = app.add_subcommand("sweep", "run one simulation per parameter value and write sweep.csv");
    sweep->add_option("config", config_path, "scenario config file")->required();
    sweep->add_option("--param", param, "dotted parameter path, e.g. contract.submission_cost")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--jobs", jobs, "parallel simulations")->check(CLI::PositiveNumber);

    CLI::App* baseline = app.add_subcommand("baseline", "print the all-good-data accuracy");
    baseline->add_option("config", config_path, "scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, seed_override);
        }
        if (sweep->parsed()) {
            return cmd_sweep(config_path, param, values, out_dir, jobs);
        }
        return cmd_baseline(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
