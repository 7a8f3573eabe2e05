#pragma once

#include <cstdint>
#include <random>

namespace qdice {

/// splitmix64 finalizer, used to decorrelate substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Independent generator for trial `index` under `master_seed`. Trials drawn
/// this way do not depend on evaluation order.
inline Rng substream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace qdice
