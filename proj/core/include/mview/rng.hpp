#pragma once

#include <cstdint>
#include <random>

namespace mview {

/// Deterministic random source. std::mt19937_64 output is fully specified by
/// the standard, and the value mappings below avoid std::*_distribution
/// (whose results may differ between standard library implementations), so a
/// given seed produces the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi], inclusive. Modulo bias is < 2^-50 for any
    /// range this library draws from.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

/// SplitMix64 mixing step; used to derive independent per-frame seeds from a
/// master seed so results do not depend on frame processing order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mview
