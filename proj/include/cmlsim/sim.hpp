#pragma once

#include "cmlsim/agents.hpp"
#include "cmlsim/contract.hpp"
#include "cmlsim/data.hpp"
#include "cmlsim/model.hpp"
#include "cmlsim/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmlsim::sim {

struct DatasetSpec {
    enum class Kind { synthetic, indexed, raw_text };
    Kind kind = Kind::synthetic;
    std::string path;      // indexed / raw_text corpus
    std::string test_path; // optional separate held-out file
    std::size_t n = 25000; // synthetic sample count
    std::optional<std::uint64_t> seed; // synthetic; defaults to the run seed
};

// Single source of truth for a run. Monetary fields are minor units; the
// config file loader scales token-denominated keys on the way in.
struct ScenarioConfig {
    std::size_t num_words = 1000;
    double train_size = 0.08;
    double test_fraction = 0.5;
    contract::ContractRules contract;
    std::vector<agents::AgentProfile> agents;
    Seconds max_virtual_time = 0; // 0 = run until quiescent
    Seconds snapshot_every = kSecondsPerDay;
    std::uint64_t seed = 1;
    DatasetSpec dataset;

    // Two-agent default scenario (one honest, one label-flipping) on
    // synthetic data.
    static ScenarioConfig defaults();

    // Throws std::runtime_error("config invalid: <field>").
    void validate() const;
};

struct Snapshot {
    Seconds t = 0;
    double accuracy = 0.0;
    std::map<AgentId, Currency> balances; // free + escrowed, per agent
    Currency pool = 0;
    Currency burned = 0;
};

struct SimulationReport {
    std::vector<Snapshot> snapshots;
    double final_accuracy = 0.0;
    double accuracy_all = 0.0;
    double gap = 0.0; // accuracy_all - final_accuracy, exactly
    std::map<AgentId, std::optional<Seconds>> drained_at; // first t with free+escrow == 0
    std::vector<AgentId> agent_order;      // config order, drives CSV columns
    std::vector<AgentId> malicious_agents; // subset of agent_order
    std::uint64_t events_processed = 0;
};

// Loads/synthesizes the configured dataset and carves the three-way split.
data::DatasetSplit prepare_dataset(const ScenarioConfig& config);

// The discrete-event loop: agent submissions, online model updates, refund
// claims, daily metric snapshots. Deterministic given (config, seed).
SimulationReport run(const ScenarioConfig& config);

// Accuracy of the model trained on the initial split plus every pool sample
// in order, with no corruption and no economics.
double baseline_accuracy(const ScenarioConfig& config);

// accuracy_all - accuracy; inputs must be percentages in [0, 100].
double compute_gap(double accuracy_all, double accuracy);

// Days until the agent's free + escrowed holdings first reached zero, or
// nullopt if that never happened. Throws "unknown agent" for ids the report
// does not cover.
std::optional<double> time_to_drain(const SimulationReport& report, const AgentId& agent);

} // namespace cmlsim::sim
