#pragma once

#include "cmlsim/types.hpp"

#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

#include "json.hpp"

namespace cmlsim::contract {

// Parameters of the incentive mechanism. Monetary fields are integer minor
// units; durations are virtual seconds.
struct ContractRules {
    Currency submission_cost = 5;
    Seconds refund_wait = 7 * kSecondsPerDay;
    Currency base_min_deposit = 50 * kUnitsPerToken;
    Seconds base_cooldown = 600;
    double escalation_deposit_factor = 2.0;
    double escalation_cooldown_factor = 6.0;
    double reward_fraction = 0.05;
    int standing_window = 10;
    double standing_threshold = 0.5;

    // Throws std::runtime_error("config invalid: <field>") on a violation.
    void validate() const;
};

struct Ledger {
    std::map<AgentId, Currency> free_balance;
    std::map<SubmissionId, Currency> escrow;
    Currency reward_pool = 0;
    Currency burned = 0;
};

// sum(free_balance) + sum(escrow) + reward_pool + burned. Constant across
// any sequence of valid operations.
Currency ledger_total(const Ledger& ledger);

struct PendingSubmission {
    SubmissionId id = 0;
    AgentId agent;
    LabeledSample sample;
    Currency stake = 0;
    Seconds submitted_at = 0;
    Seconds claimable_at = 0;
};

enum class SubmitError {
    none,
    below_required_deposit,
    below_submission_cost,
    insufficient_balance,
    cooldown_not_elapsed,
};

const char* describe(SubmitError error);

struct SubmitResult {
    SubmitError error = SubmitError::none;
    SubmissionId id = 0;

    bool ok() const { return error == SubmitError::none; }
};

struct ClaimOutcome {
    bool verified = false;
    Currency paid = 0;
};

// Thrown for claim/lookup misuse; the message is the error name.
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The incentive-mechanism state machine. One instance owns one ledger and
// is driven under a strict total order of virtual time. Failed operations
// leave the ledger bit-identical.
class Contract {
public:
    explicit Contract(ContractRules rules);

    void register_agent(const AgentId& agent, Currency start_balance);
    bool is_registered(const AgentId& agent) const;

    // base_min_deposit, escalated by escalation_deposit_factor while the
    // agent's recorded failure rate is at or above standing_threshold.
    Currency required_deposit(const AgentId& agent) const;
    Seconds required_cooldown(const AgentId& agent) const;

    // Burns submission_cost, escrows the rest of the offered deposit and
    // makes it claimable at now + refund_wait.
    SubmitResult submit(const AgentId& agent,
                        const LabeledSample& sample,
                        Currency offered_deposit,
                        Seconds now);

    // Settles a pending submission against the supplied model prediction:
    // a match refunds the stake plus floor(reward_fraction * reward_pool),
    // a mismatch forfeits the stake to the reward pool.
    ClaimOutcome claim(const AgentId& agent,
                       SubmissionId submission,
                       Seconds now,
                       Label model_prediction);

    const ContractRules& rules() const { return rules_; }
    const Ledger& ledger() const { return ledger_; }
    Currency free_balance_of(const AgentId& agent) const;
    Currency escrow_of(const AgentId& agent) const;
    const PendingSubmission* pending(SubmissionId submission) const;
    std::size_t pending_count() const { return pending_.size(); }

    nlohmann::json to_json() const;

private:
    struct AgentStanding {
        std::deque<bool> recent_outcomes; // true = successful claim
        std::optional<Seconds> last_submission_at;
        Currency escrowed = 0;
    };

    const AgentStanding& standing_of(const AgentId& agent) const;
    AgentStanding& standing_of(const AgentId& agent);
    bool bad_standing(const AgentStanding& standing) const;
    void record_outcome(AgentStanding& standing, bool success);

    ContractRules rules_;
    Ledger ledger_;
    std::map<AgentId, AgentStanding> standings_;
    std::map<SubmissionId, PendingSubmission> pending_;
    SubmissionId next_id_ = 1;
};

} // namespace cmlsim::contract
