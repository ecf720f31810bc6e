#include "cmlsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace cmlsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::string_view stream_name)
    : engine_(splitmix64(splitmix64(seed) ^ hash_name(stream_name))) {}

std::uint64_t RngStream::next_u64() {
    return engine_();
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) {
            return r % n;
        }
    }
}

double RngStream::normal(double mean, double stdev) {
    const double u1 = 1.0 - next_double(); // (0, 1], keeps log finite
    const double u2 = next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + stdev * z;
}

double RngStream::exponential(double mean) {
    const double u = next_double();
    return -mean * std::log1p(-u);
}

} // namespace cmlsim
