#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace graphsamp {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed from a parent seed and a stream id.
// The mapping depends only on its arguments, so trials seeded this way can
// run in any order.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> streams) noexcept {
  for (auto s : streams) seed = mix_seed(seed, s);
  return seed;
}

}  // namespace graphsamp
