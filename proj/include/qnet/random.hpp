#pragma once

#include <cstdint>
#include <random>

namespace qnet {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based seed splitting: child k of `parent` is
//   mix64(parent ^ mix64(k * golden)) for k > 0, and `parent` itself for k = 0.
// Children of one parent are pairwise distinct streams; chaining calls builds a
// seed tree (run -> block -> route) without any shared generator state.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept {
    if (counter == 0) return parent;
    return mix64(parent ^ mix64(counter * 0x9E3779B97F4A7C15ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(parent, a), b);
}

}  // namespace qnet
