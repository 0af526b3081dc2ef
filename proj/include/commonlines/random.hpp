#pragma once

#include <cstdint>
#include <random>

namespace clines {

using Rng = std::mt19937_64;

// splitmix64 finalizer; turns (seed, stream) into an independent sub-seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0,1) from the top 53 bits; unlike the std distributions
// this is identical across standard library implementations.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace clines
