#pragma once
#include <cstdint>
#include <random>

namespace critwin {

// splitmix64, used to derive independent replica streams from a master seed.
// Replica r of seed s uses mt19937_64 seeded with mix(s, r); this mapping is
// part of the output contract (results must not depend on worker scheduling).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t replica) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (replica + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t replica = 0) {
    return Rng(mix_seed(seed, replica));
}

}  // namespace critwin
