#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mrsurvey {

// SplitMix64 finalizer. Used to hash (seed, path...) into engine seeds so
// that logically distinct random streams never share state.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Collapses a master seed plus a path of indices (replicate number, purpose
// tag, ...) into one substream seed. Deterministic and order-sensitive.
constexpr std::uint64_t mix_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x1f83d9abfb41bd6bULL));
  return s;
}

// A fresh engine for the given substream. Streams with different paths are
// independent for practical purposes; the same (seed, path) always yields
// the same stream, regardless of what other streams were consumed.
inline std::mt19937_64 substream(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(mix_seed(seed, path));
}

// Canonical uniform on [0, 1) with 53 random bits. Hand-rolled so draws are
// bit-identical across standard library implementations.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer on [0, bound) by rejection.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % bound;
}

inline bool bernoulli(std::mt19937_64& g, double p) { return uniform01(g) < p; }

}  // namespace mrsurvey
