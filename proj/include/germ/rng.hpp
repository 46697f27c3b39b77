#pragma once

#include <cstdint>
#include <random>

namespace germ {

/// Deterministic sampling helper. Draws are derived from raw
/// std::mt19937_64 output with a fixed 53-bit mapping, so sequences are
/// reproducible bit-for-bit independent of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

private:
    std::mt19937_64 gen_;
};

inline constexpr std::uint64_t kDefaultProbeSeed = 0x9e3779b97f4a7c15ull;

}  // namespace germ
