#pragma once

#include "cmlsim/rng.hpp"
#include "cmlsim/types.hpp"

namespace cmlsim::agents {

enum class CorruptionMode {
    label_flip, // keep features, invert the label
    noise,      // keep the label, replace features with a random subset
};

struct AgentProfile {
    AgentId id;
    bool honest = true;
    Currency start_balance = 0;
    Currency mean_deposit = 0;
    Currency stdev_deposit = 0;
    Seconds mean_update_wait = 1;
    double prob_mistake = 0.0; // good agents only
    CorruptionMode corruption_mode = CorruptionMode::label_flip;
};

// Normal(mean_deposit, stdev_deposit) rounded to the nearest minor unit,
// clamped below at submission_cost + 1 so the stake stays positive.
Currency draw_deposit(const AgentProfile& profile, Currency submission_cost, RngStream& rng);

// Exponential with the configured mean, rounded up to whole seconds (>= 1).
Seconds draw_wait(const AgentProfile& profile, RngStream& rng);

// Honest policy: flips the label with probability prob_mistake, features
// untouched.
LabeledSample good_transform(LabeledSample sample, double prob_mistake, RngStream& rng);

// Malicious policy for one sample, per the configured mode.
LabeledSample corrupt(LabeledSample sample,
                      CorruptionMode mode,
                      std::size_t num_words,
                      RngStream& rng);

} // namespace cmlsim::agents
