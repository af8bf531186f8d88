#pragma once

#include <cstdint>
#include <random>

namespace robound {

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `index` under a base seed (per-cell / per-trial streams).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Explicit random state. Variates are built from raw 64-bit engine output
/// so sequences are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double exponential();
    std::uint64_t bits() { return engine_(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace robound
