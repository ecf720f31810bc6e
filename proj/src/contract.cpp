#include "cmlsim/contract.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace cmlsim::contract {

namespace {

std::runtime_error invalid(const char* field) {
    return std::runtime_error(std::string("config invalid: ") + field);
}

} // namespace

void ContractRules::validate() const {
    if (submission_cost < 0) throw invalid("submission_cost");
    if (refund_wait < 0) throw invalid("refund_wait");
    if (base_min_deposit < 0) throw invalid("base_min_deposit");
    if (base_cooldown < 0) throw invalid("base_cooldown");
    if (escalation_deposit_factor < 1.0) throw invalid("escalation_deposit_factor");
    if (escalation_cooldown_factor < 1.0) throw invalid("escalation_cooldown_factor");
    if (reward_fraction < 0.0 || reward_fraction > 1.0) throw invalid("reward_fraction");
    if (standing_window < 1) throw invalid("standing_window");
    if (standing_threshold < 0.0 || standing_threshold > 1.0) throw invalid("standing_threshold");
}

Currency ledger_total(const Ledger& ledger) {
    Currency total = ledger.reward_pool + ledger.burned;
    for (const auto& [agent, balance] : ledger.free_balance) {
        total += balance;
    }
    for (const auto& [id, stake] : ledger.escrow) {
        total += stake;
    }
    return total;
}

const char* describe(SubmitError error) {
    switch (error) {
        case SubmitError::none: return "ok";
        case SubmitError::below_required_deposit: return "deposit below required minimum";
        case SubmitError::below_submission_cost: return "deposit cannot cover submission cost";
        case SubmitError::insufficient_balance: return "insufficient balance";
        case SubmitError::cooldown_not_elapsed: return "cooldown not elapsed";
    }
    return "unknown";
}

Contract::Contract(ContractRules rules) : rules_(rules) {
    rules_.validate();
}

void Contract::register_agent(const AgentId& agent, Currency start_balance) {
    if (start_balance < 0) {
        throw invalid("start_balance");
    }
    if (!standings_.try_emplace(agent).second) {
        throw std::runtime_error("agent already registered: " + agent);
    }
    ledger_.free_balance[agent] = start_balance;
}

bool Contract::is_registered(const AgentId& agent) const {
    return standings_.contains(agent);
}

const Contract::AgentStanding& Contract::standing_of(const AgentId& agent) const {
    auto it = standings_.find(agent);
    if (it == standings_.end()) {
        throw std::runtime_error("unregistered agent");
    }
    return it->second;
}

Contract::AgentStanding& Contract::standing_of(const AgentId& agent) {
    return const_cast<AgentStanding&>(std::as_const(*this).standing_of(agent));
}

bool Contract::bad_standing(const AgentStanding& standing) const {
    if (standing.recent_outcomes.empty()) {
        return false;
    }
    const auto failures = static_cast<double>(
        std::count(standing.recent_outcomes.begin(), standing.recent_outcomes.end(), false));
    const auto window = static_cast<double>(standing.recent_outcomes.size());
    return failures >= rules_.standing_threshold * window;
}

void Contract::record_outcome(AgentStanding& standing, bool success) {
    standing.recent_outcomes.push_back(success);
    while (standing.recent_outcomes.size() > static_cast<std::size_t>(rules_.standing_window)) {
        standing.recent_outcomes.pop_front();
    }
}

Currency Contract::required_deposit(const AgentId& agent) const {
    const AgentStanding& standing = standing_of(agent);
    if (!bad_standing(standing)) {
        return rules_.base_min_deposit;
    }
    return static_cast<Currency>(std::llround(
        static_cast<double>(rules_.base_min_deposit) * rules_.escalation_deposit_factor));
}

Seconds Contract::required_cooldown(const AgentId& agent) const {
    const AgentStanding& standing = standing_of(agent);
    if (!bad_standing(standing)) {
        return rules_.base_cooldown;
    }
    return static_cast<Seconds>(std::llround(
        static_cast<double>(rules_.base_cooldown) * rules_.escalation_cooldown_factor));
}

SubmitResult Contract::submit(const AgentId& agent,
                              const LabeledSample& sample,
                              Currency offered_deposit,
                              Seconds now) {
    AgentStanding& standing = standing_of(agent);
    if (offered_deposit < required_deposit(agent)) {
        return {SubmitError::below_required_deposit, 0};
    }
    if (offered_deposit < rules_.submission_cost) {
        return {SubmitError::below_submission_cost, 0};
    }
    Currency& balance = ledger_.free_balance.at(agent);
    if (balance < offered_deposit) {
        return {SubmitError::insufficient_balance, 0};
    }
    if (standing.last_submission_at &&
        now - *standing.last_submission_at < required_cooldown(agent)) {
        return {SubmitError::cooldown_not_elapsed, 0};
    }

    const Currency stake = offered_deposit - rules_.submission_cost;
    const SubmissionId id = next_id_++;
    balance -= offered_deposit;
    ledger_.burned += rules_.submission_cost;
    ledger_.escrow.emplace(id, stake);
    pending_.emplace(id, PendingSubmission{id, agent, sample, stake, now,
                                           now + rules_.refund_wait});
    standing.escrowed += stake;
    standing.last_submission_at = now;
    return {SubmitError::none, id};
}

ClaimOutcome Contract::claim(const AgentId& agent,
                             SubmissionId submission,
                             Seconds now,
                             Label model_prediction) {
    auto it = pending_.find(submission);
    if (it == pending_.end()) {
        throw ContractError("no such pending submission");
    }
    const PendingSubmission& sub = it->second;
    if (now < sub.claimable_at) {
        throw ContractError("refund wait not elapsed");
    }
    if (sub.agent != agent) {
        throw ContractError("not the submitter");
    }

    AgentStanding& standing = standings_.at(agent);
    ClaimOutcome outcome;
    outcome.verified = model_prediction == sub.sample.label;
    if (outcome.verified) {
        const auto bonus = static_cast<Currency>(std::floor(
            rules_.reward_fraction * static_cast<double>(ledger_.reward_pool)));
        outcome.paid = sub.stake + bonus;
        ledger_.reward_pool -= bonus;
        ledger_.free_balance.at(agent) += outcome.paid;
    } else {
        ledger_.reward_pool += sub.stake;
    }
    record_outcome(standing, outcome.verified);
    standing.escrowed -= sub.stake;
    ledger_.escrow.erase(submission);
    pending_.erase(it);
    return outcome;
}

Currency Contract::free_balance_of(const AgentId& agent) const {
    auto it = ledger_.free_balance.find(agent);
    if (it == ledger_.free_balance.end()) {
        throw std::runtime_error("unregistered agent");
    }
    return it->second;
}

Currency Contract::escrow_of(const AgentId& agent) const {
    return standing_of(agent).escrowed;
}

const PendingSubmission* Contract::pending(SubmissionId submission) const {
    auto it = pending_.find(submission);
    return it == pending_.end() ? nullptr : &it->second;
}

nlohmann::json Contract::to_json() const {
    nlohmann::json escrow = nlohmann::json::object();
    for (const auto& [id, stake] : ledger_.escrow) {
        escrow[std::to_string(id)] = stake;
    }
    nlohmann::json pending = nlohmann::json::array();
    for (const auto& [id, sub] : pending_) {
        pending.push_back({{"id", sub.id},
                           {"agent", sub.agent},
                           {"stake", sub.stake},
                           {"submitted_at", sub.submitted_at},
                           {"claimable_at", sub.claimable_at}});
    }
    nlohmann::json standings = nlohmann::json::object();
    for (const auto& [agent, standing] : standings_) {
        nlohmann::json outcomes = nlohmann::json::array();
        for (bool success : standing.recent_outcomes) {
            outcomes.push_back(success);
        }
        standings[agent] = {
            {"recent_outcomes", outcomes},
            {"last_submission_at", standing.last_submission_at
                                       ? nlohmann::json(*standing.last_submission_at)
                                       : nlohmann::json(nullptr)}};
    }
    return {{"rules",
             {{"submission_cost", rules_.submission_cost},
              {"refund_wait", rules_.refund_wait},
              {"base_min_deposit", rules_.base_min_deposit},
              {"base_cooldown", rules_.base_cooldown},
              {"escalation_deposit_factor", rules_.escalation_deposit_factor},
              {"escalation_cooldown_factor", rules_.escalation_cooldown_factor},
              {"reward_fraction", rules_.reward_fraction},
              {"standing_window", rules_.standing_window},
              {"standing_threshold", rules_.standing_threshold}}},
            {"free_balance", ledger_.free_balance},
            {"escrow", escrow},
            {"reward_pool", ledger_.reward_pool},
            {"burned", ledger_.burned},
            {"pending", pending},
            {"standings", standings}};
}

} // namespace cmlsim::contract
