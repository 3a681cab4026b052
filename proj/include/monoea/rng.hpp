#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace monoea {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used as the counter-based seed mixer for per-level and
// per-run substreams.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Unbiased draw from [0, bound) (Lemire's multiply-shift with rejection).
// Implemented here instead of std::uniform_int_distribution so that seeded
// streams are identical across standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Number of failures before the first success of Bernoulli(p) trials, p in (0, 1].
inline std::uint64_t geometric_skip(Rng& rng, double p) {
    if (p >= 1.0) return 0;
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double k = std::floor(std::log(u) / std::log1p(-p));
    return k >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(k);
}

}  // namespace monoea
