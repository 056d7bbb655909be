#pragma once

// Counter-based random streams: every draw is a pure function of
// (master_seed, realization, step), so ensemble results are independent
// of execution order and thread scheduling.

#include <cstdint>

namespace fsl::rng {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t realization,
                                  std::uint64_t step, std::uint64_t lane) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ realization);
    h = mix64(h ^ (step << 1));
    h = mix64(h ^ (lane << 2));
    return h;
}

/// Uniform double in (0, 1); never returns exactly 0.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Standard normal via Box-Muller on two counter lanes.
double standard_normal(std::uint64_t seed, std::uint64_t realization, std::uint64_t step);

}  // namespace fsl::rng
