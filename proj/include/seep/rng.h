#ifndef SEEP_RNG_H_
#define SEEP_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace seep {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent seeds from a parent seed.
inline std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the `index`-th child stream of `seed`. Children of the same parent
// are pairwise independent and independent of scheduling order.
inline std::uint64_t SubSeed(std::uint64_t seed, std::uint64_t index) {
  return MixSeed(MixSeed(seed) ^ MixSeed(index + 0x632be59bd9b4e019ULL));
}

// Named substream ("generator", "detector", "kmeans", ...). FNV-1a on the
// name so the mapping is stable across builds.
inline std::uint64_t SubSeed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return SubSeed(seed, h);
}

}  // namespace seep

#endif  // SEEP_RNG_H_
