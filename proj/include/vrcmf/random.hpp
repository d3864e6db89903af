#pragma once

#include <cstdint>
#include <random>

namespace vrcmf {

using Rng = std::mt19937_64;

/// Fans a single user seed out into independent sub-streams (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Named sub-streams so that adding a consumer never shifts another's draws.
enum class SeedStream : std::uint64_t {
    split = 1,
    factors = 2,
    network_init = 3,
    network_shuffle = 4,
    dropout = 5,
    glove = 6,
};

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream) {
    return derive_seed(base, static_cast<std::uint64_t>(stream));
}

}  // namespace vrcmf
