#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cmlsim/agents.hpp"

#include <algorithm>
#include <cmath>

using namespace cmlsim;
using namespace cmlsim::agents;

namespace {

AgentProfile profile_with(Currency mean, Currency stdev, Seconds wait = 600) {
    AgentProfile p;
    p.id = "a";
    p.mean_deposit = mean;
    p.stdev_deposit = stdev;
    p.mean_update_wait = wait;
    return p;
}

} // namespace

TEST_CASE("draw_deposit: zero stdev is the mean every time") {
    RngStream rng(1, "dep");
    const AgentProfile p = profile_with(50, 0);
    for (int i = 0; i < 100; ++i) {
        CHECK(draw_deposit(p, 5, rng) == 50);
    }
}

TEST_CASE("draw_deposit: clamped at submission_cost + 1") {
    RngStream rng(2, "dep");
    const AgentProfile p = profile_with(1, 40); // draws go deep below zero
    Currency lowest = 1 << 30;
    for (int i = 0; i < 2000; ++i) {
        lowest = std::min(lowest, draw_deposit(p, 5, rng));
    }
    CHECK(lowest == 6);
}

TEST_CASE("draw_deposit and draw_wait are pure in the stream state") {
    const AgentProfile p = profile_with(50, 10);
    RngStream a(9, "same");
    RngStream b(9, "same");
    for (int i = 0; i < 50; ++i) {
        CHECK(draw_deposit(p, 5, a) == draw_deposit(p, 5, b));
        CHECK(draw_wait(p, a) == draw_wait(p, b));
    }
}

TEST_CASE("draw_wait: whole seconds >= 1 with the configured mean") {
    RngStream rng(3, "wait");
    const AgentProfile p = profile_with(50, 0, 600);
    double sum = 0.0;
    Seconds lowest = 1 << 30;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Seconds w = draw_wait(p, rng);
        lowest = std::min(lowest, w);
        sum += static_cast<double>(w);
    }
    CHECK(lowest >= 1);
    const double mean = sum / n;
    // law of large numbers band: +/-5% of the configured mean
    CHECK(mean > 600.0 * 0.95);
    CHECK(mean < 600.0 * 1.05);
}

TEST_CASE("good_transform: degenerate probabilities") {
    RngStream rng(4, "good");
    const LabeledSample sample{{3, 7}, 1};
    for (int i = 0; i < 50; ++i) {
        CHECK(good_transform(sample, 0.0, rng) == sample);
        const LabeledSample flipped = good_transform(sample, 1.0, rng);
        CHECK(flipped.label == 0);
        CHECK(flipped.features == sample.features);
    }
}

TEST_CASE("good_transform: rare mistakes stay inside the binomial band") {
    RngStream rng(5, "good");
    const LabeledSample sample{{1}, 0};
    const double p = 0.0001;
    const int n = 100000;
    int flips = 0;
    for (int i = 0; i < n; ++i) {
        flips += good_transform(sample, p, rng).label != sample.label ? 1 : 0;
    }
    // 3-sigma band around np = 10
    const double expected = n * p;
    const double sigma = std::sqrt(n * p * (1.0 - p));
    CHECK(flips >= 0);
    CHECK(static_cast<double>(flips) <= expected + 3.0 * sigma + 1.0);
}

TEST_CASE("corrupt: label_flip is a feature-preserving involution") {
    RngStream rng(6, "bad");
    const LabeledSample sample{{2, 5, 9}, 1};
    const LabeledSample flipped = corrupt(sample, CorruptionMode::label_flip, 16, rng);
    CHECK(flipped.label == 0);
    CHECK(flipped.features == sample.features);
    CHECK(corrupt(flipped, CorruptionMode::label_flip, 16, rng) == sample);
}

TEST_CASE("corrupt: noise keeps the label and the cardinality") {
    RngStream rng(7, "bad");
    const LabeledSample sample{{2, 5, 9}, 1};
    for (int i = 0; i < 200; ++i) {
        const LabeledSample noisy = corrupt(sample, CorruptionMode::noise, 16, rng);
        CHECK(noisy.label == 1);
        REQUIRE(noisy.features.size() == 3);
        CHECK(std::is_sorted(noisy.features.begin(), noisy.features.end()));
        CHECK(std::adjacent_find(noisy.features.begin(), noisy.features.end()) ==
              noisy.features.end());
        CHECK(noisy.features.back() < 16);
    }
}
