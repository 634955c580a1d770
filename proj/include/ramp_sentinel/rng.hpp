#pragma once
// Deterministic RNG built on splitmix64. Hand-rolled instead of <random>
// distributions so traces are bit-identical across standard libraries and so
// independent streams can be derived stably from a (seed, label) pair.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace ramp {

[[nodiscard]] inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    // Stream keyed by (seed, label): draws depend only on the pair, never on
    // how many values sibling streams have consumed.
    Rng(std::uint64_t seed, std::string_view label) noexcept : state_(seed) {
        std::uint64_t h = 1469598103934665603ull;
        for (const char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        state_ ^= h;
        (void)splitmix64(state_);
    }

    [[nodiscard]] std::uint64_t next() noexcept { return splitmix64(state_); }

    // Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    [[nodiscard]] double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    [[nodiscard]] bool bernoulli(double p) noexcept { return uniform() < p; }

    // Box-Muller; the spare value is discarded so every call costs exactly
    // two uniform draws, which keeps draw accounting predictable.
    [[nodiscard]] double normal(double mean, double stddev) noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    [[nodiscard]] int poisson(double mean) noexcept {
        if (!(mean > 0.0)) return 0;
        if (mean > 60.0) {
            const double v = std::round(normal(mean, std::sqrt(mean)));
            return v < 0.0 ? 0 : static_cast<int>(v);
        }
        const double limit = std::exp(-mean);
        int k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

private:
    std::uint64_t state_;
};

} // namespace ramp
