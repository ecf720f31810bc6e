#include "cmlsim/agents.hpp"

#include <algorithm>
#include <cmath>

namespace cmlsim::agents {

Currency draw_deposit(const AgentProfile& profile, Currency submission_cost, RngStream& rng) {
    const double drawn = rng.normal(static_cast<double>(profile.mean_deposit),
                                    static_cast<double>(profile.stdev_deposit));
    const auto rounded = static_cast<Currency>(std::llround(drawn));
    return std::max(rounded, submission_cost + 1);
}

Seconds draw_wait(const AgentProfile& profile, RngStream& rng) {
    const double drawn = rng.exponential(static_cast<double>(profile.mean_update_wait));
    const auto whole = static_cast<Seconds>(std::ceil(drawn));
    return std::max<Seconds>(whole, 1);
}

LabeledSample good_transform(LabeledSample sample, double prob_mistake, RngStream& rng) {
    if (rng.next_double() < prob_mistake) {
        sample.label ^= 1;
    }
    return sample;
}

LabeledSample corrupt(LabeledSample sample,
                      CorruptionMode mode,
                      std::size_t num_words,
                      RngStream& rng) {
    if (mode == CorruptionMode::label_flip) {
        sample.label ^= 1;
        return sample;
    }
    // noise: same cardinality, fresh uniform subset of [0, num_words)
    const std::size_t k = std::min(sample.features.size(), num_words);
    std::vector<FeatureIndex> fresh;
    fresh.reserve(k);
    while (fresh.size() < k) {
        const auto idx = static_cast<FeatureIndex>(rng.uniform_below(num_words));
        if (std::find(fresh.begin(), fresh.end(), idx) == fresh.end()) {
            fresh.push_back(idx);
        }
    }
    std::sort(fresh.begin(), fresh.end());
    sample.features = std::move(fresh);
    return sample;
}

} // namespace cmlsim::agents
