#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmlsim {

// Currency is kept in integer minor units so that ledger conservation is
// exact. One token of the configured economy equals kUnitsPerToken units;
// human-facing config values are given in tokens and scaled at load.
using Currency = std::int64_t;
inline constexpr Currency kUnitsPerToken = 100;

// Virtual time in whole seconds.
using Seconds = std::int64_t;
inline constexpr Seconds kSecondsPerDay = 86400;

using AgentId = std::string;
using SubmissionId = std::uint64_t;
using FeatureIndex = std::uint32_t;
using Label = int; // 0 = negative, 1 = positive

// A data point as the platform sees it: a sorted, duplicate-free set of
// binary feature indices plus a two-class label.
struct LabeledSample {
    std::vector<FeatureIndex> features;
    Label label = 0;

    bool operator==(const LabeledSample&) const = default;
};

} // namespace cmlsim
