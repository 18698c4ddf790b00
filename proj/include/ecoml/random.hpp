#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ecoml {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed from a base seed and a sequence of stream tags.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(base);
    for (auto t : tags) h = mix64(h ^ mix64(t));
    return h;
}

}  // namespace ecoml
