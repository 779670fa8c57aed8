#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "dfadma/timeseries.hpp"

namespace dfadma {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20121002;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-mode child seed: depends only on (base, index, attempt), so any
/// replicate can be regenerated on its own.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t attempt = 0) {
  return mix64(mix64(mix64(base) ^ index) ^ (attempt * 0xd1b54a32d192ed03ULL));
}

void shuffle_values(std::span<double> values, std::uint64_t seed);

/// Uniform random permutation of the values; dates keep their order.
ReturnSeries shuffle(const ReturnSeries& r, std::uint64_t seed);

}  // namespace dfadma
