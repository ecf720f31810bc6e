#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cmlsim {

// Deterministic random stream. A run owns one seed; every consumer derives
// its own named stream from it, so adding a stream never perturbs the draws
// of another. Distribution sampling is hand-rolled on top of mt19937_64
// because the std::*_distribution sequences are implementation-defined and
// the simulator promises identical output for identical (config, seed).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view stream_name);

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double next_double();

    // Uniform integer in [0, n); n must be positive. Unbiased (rejection).
    std::uint64_t uniform_below(std::uint64_t n);

    // Box-Muller.
    double normal(double mean, double stdev);

    // Inverse CDF, mean > 0.
    double exponential(double mean);

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// FNV-1a, used to turn stream names into seed material.
std::uint64_t hash_name(std::string_view name);

} // namespace cmlsim
