#pragma once

#include <cstdint>
#include <random>

namespace deliverai {

/// Seeded generator with platform-independent draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// std::*_distribution adaptors are not, so the two draws used across the
/// library are implemented here directly on the raw engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Rejection sampling keeps the result unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    std::uint64_t next() { return engine_(); }

    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
};

/// Seed for a named sub-stream, e.g. one Q-learning agent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) { return seed ^ stream; }

}  // namespace deliverai
