#include "cmlsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

namespace cmlsim::config {

namespace {

std::runtime_error invalid(const std::string& field) {
    return std::runtime_error("config invalid: " + field);
}

std::string trim(std::string_view text) {
    const auto begin = text.find_first_not_of(" \t");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = text.find_last_not_of(" \t");
    return std::string(text.substr(begin, end - begin + 1));
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t consumed = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw invalid(key);
    }
    if (consumed != value.size() || !std::isfinite(parsed)) {
        throw invalid(key);
    }
    return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw invalid(key);
}

std::uint64_t to_count(const std::string& key, double value) {
    if (!(value >= 0.0) || value > 9.0e18 || value != std::floor(value)) {
        throw invalid(key);
    }
    return static_cast<std::uint64_t>(value);
}

Currency tokens_to_units(const std::string& key, double tokens) {
    const double units = tokens * static_cast<double>(kUnitsPerToken);
    if (!std::isfinite(units) || std::abs(units) > 9.0e18) {
        throw invalid(key);
    }
    return static_cast<Currency>(std::llround(units));
}

Currency to_currency(const std::string& key, double value) {
    if (!std::isfinite(value) || std::abs(value) > 9.0e18) {
        throw invalid(key);
    }
    return static_cast<Currency>(std::llround(value));
}

Seconds to_seconds(const std::string& key, double value) {
    if (!std::isfinite(value) || std::abs(value) > 9.0e18) {
        throw invalid(key);
    }
    return static_cast<Seconds>(std::llround(value));
}

agents::CorruptionMode parse_corruption_mode(const std::string& key, const std::string& value) {
    if (value == "label_flip") return agents::CorruptionMode::label_flip;
    if (value == "noise") return agents::CorruptionMode::noise;
    throw invalid(key);
}

sim::DatasetSpec::Kind parse_dataset_kind(const std::string& key, const std::string& value) {
    if (value == "synthetic") return sim::DatasetSpec::Kind::synthetic;
    if (value == "indexed") return sim::DatasetSpec::Kind::indexed;
    if (value == "raw_text") return sim::DatasetSpec::Kind::raw_text;
    throw invalid(key);
}

// Applies a global or contract key; returns false for keys it cannot place.
bool apply_global_key(sim::ScenarioConfig& config, const std::string& key,
                      const std::string& value) {
    auto& rules = config.contract;
    if (key == "num_words") {
        config.num_words = static_cast<std::size_t>(to_count(key, parse_number(key, value)));
    } else if (key == "train_size") {
        config.train_size = parse_number(key, value);
    } else if (key == "test_fraction") {
        config.test_fraction = parse_number(key, value);
    } else if (key == "seed") {
        config.seed = to_count(key, parse_number(key, value));
    } else if (key == "snapshot_every") {
        config.snapshot_every = to_seconds(key, parse_number(key, value));
    } else if (key == "max_virtual_time") {
        config.max_virtual_time = to_seconds(key, parse_number(key, value));
    } else if (key == "submission_cost") {
        rules.submission_cost = to_currency(key, parse_number(key, value));
    } else if (key == "refund_wait") {
        rules.refund_wait = to_seconds(key, parse_number(key, value));
    } else if (key == "base_min_deposit") {
        rules.base_min_deposit = tokens_to_units(key, parse_number(key, value));
    } else if (key == "base_cooldown") {
        rules.base_cooldown = to_seconds(key, parse_number(key, value));
    } else if (key == "escalation_deposit_factor") {
        rules.escalation_deposit_factor = parse_number(key, value);
    } else if (key == "escalation_cooldown_factor") {
        rules.escalation_cooldown_factor = parse_number(key, value);
    } else if (key == "reward_fraction") {
        rules.reward_fraction = parse_number(key, value);
    } else if (key == "standing_window") {
        rules.standing_window = static_cast<int>(to_count(key, parse_number(key, value)));
    } else if (key == "standing_threshold") {
        rules.standing_threshold = parse_number(key, value);
    } else if (key == "dataset") {
        config.dataset.kind = parse_dataset_kind(key, value);
    } else if (key == "dataset_path") {
        config.dataset.path = value;
    } else if (key == "dataset_test_path") {
        config.dataset.test_path = value;
    } else if (key == "dataset_n") {
        config.dataset.n = static_cast<std::size_t>(to_count(key, parse_number(key, value)));
    } else if (key == "dataset_seed") {
        config.dataset.seed = to_count(key, parse_number(key, value));
    } else {
        return false;
    }
    return true;
}

void apply_agent_key(agents::AgentProfile& profile, const std::string& full_key,
                     const std::string& field, const std::string& value) {
    if (field == "honest") {
        profile.honest = parse_bool(full_key, value);
    } else if (field == "start_balance") {
        profile.start_balance = tokens_to_units(full_key, parse_number(full_key, value));
    } else if (field == "mean_deposit") {
        profile.mean_deposit = tokens_to_units(full_key, parse_number(full_key, value));
    } else if (field == "stdev_deposit") {
        profile.stdev_deposit = tokens_to_units(full_key, parse_number(full_key, value));
    } else if (field == "mean_update_wait_s") {
        profile.mean_update_wait = to_seconds(full_key, parse_number(full_key, value));
    } else if (field == "prob_mistake") {
        profile.prob_mistake = parse_number(full_key, value);
    } else if (field == "corruption_mode") {
        profile.corruption_mode = parse_corruption_mode(full_key, value);
    } else {
        throw invalid(full_key);
    }
}

} // namespace

sim::ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }

    sim::ScenarioConfig config = sim::ScenarioConfig::defaults();
    std::vector<agents::AgentProfile> declared_agents;
    std::map<AgentId, std::size_t> agent_index;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config parse error at line " + std::to_string(line_no));
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::runtime_error("config parse error at line " + std::to_string(line_no));
        }

        if (key.starts_with("agent.")) {
            const auto field_dot = key.find('.', 6);
            if (field_dot == std::string::npos || field_dot == 6) {
                throw invalid(key);
            }
            const AgentId agent_id = key.substr(6, field_dot - 6);
            const std::string field = key.substr(field_dot + 1);
            auto [it, inserted] = agent_index.try_emplace(agent_id, declared_agents.size());
            if (inserted) {
                agents::AgentProfile profile;
                profile.id = agent_id;
                declared_agents.push_back(profile);
            }
            apply_agent_key(declared_agents[it->second], key, field, value);
        } else if (!apply_global_key(config, key, value)) {
            throw invalid(key);
        }
    }

    // Declaring any agent replaces the default pair wholesale.
    if (!declared_agents.empty()) {
        config.agents = std::move(declared_agents);
    }
    config.validate();
    return config;
}

void apply_parameter(sim::ScenarioConfig& config, const std::string& path, double value) {
    auto unknown = [&path]() {
        return std::runtime_error("unknown parameter " + path);
    };

    std::string field = path;
    if (path.starts_with("agents[")) {
        const auto close = path.find(']');
        if (close == std::string::npos || close + 1 >= path.size() || path[close + 1] != '.') {
            throw unknown();
        }
        std::size_t index = 0;
        try {
            index = static_cast<std::size_t>(std::stoul(path.substr(7, close - 7)));
        } catch (const std::exception&) {
            throw unknown();
        }
        if (index >= config.agents.size()) {
            throw unknown();
        }
        agents::AgentProfile& profile = config.agents[index];
        field = path.substr(close + 2);
        if (field == "start_balance") {
            profile.start_balance = tokens_to_units(path, value);
        } else if (field == "mean_deposit") {
            profile.mean_deposit = tokens_to_units(path, value);
        } else if (field == "stdev_deposit") {
            profile.stdev_deposit = tokens_to_units(path, value);
        } else if (field == "mean_update_wait_s") {
            profile.mean_update_wait = to_seconds(path, value);
        } else if (field == "prob_mistake") {
            profile.prob_mistake = value;
        } else {
            throw unknown();
        }
        return;
    }

    if (field.starts_with("contract.")) {
        field = field.substr(9);
    }
    auto& rules = config.contract;
    if (field == "num_words") {
        config.num_words = static_cast<std::size_t>(to_count(path, value));
    } else if (field == "train_size") {
        config.train_size = value;
    } else if (field == "test_fraction") {
        config.test_fraction = value;
    } else if (field == "seed") {
        config.seed = to_count(path, value);
    } else if (field == "snapshot_every") {
        config.snapshot_every = to_seconds(path, value);
    } else if (field == "max_virtual_time") {
        config.max_virtual_time = to_seconds(path, value);
    } else if (field == "dataset_n") {
        config.dataset.n = static_cast<std::size_t>(to_count(path, value));
    } else if (field == "submission_cost") {
        rules.submission_cost = to_currency(path, value);
    } else if (field == "refund_wait") {
        rules.refund_wait = to_seconds(path, value);
    } else if (field == "base_min_deposit") {
        rules.base_min_deposit = tokens_to_units(path, value);
    } else if (field == "base_cooldown") {
        rules.base_cooldown = to_seconds(path, value);
    } else if (field == "escalation_deposit_factor") {
        rules.escalation_deposit_factor = value;
    } else if (field == "escalation_cooldown_factor") {
        rules.escalation_cooldown_factor = value;
    } else if (field == "reward_fraction") {
        rules.reward_fraction = value;
    } else if (field == "standing_window") {
        rules.standing_window = static_cast<int>(to_count(path, value));
    } else if (field == "standing_threshold") {
        rules.standing_threshold = value;
    } else {
        throw unknown();
    }
}

} // namespace cmlsim::config
