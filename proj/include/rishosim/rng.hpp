#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace risho {

// splitmix64, used for seed derivation only (never as the simulation RNG).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic seed splitting: replicate seed from the master seed, then
// per-subsystem substreams from labeled keys. Same (master, replicate) pair
// always yields the same substream regardless of evaluation order.
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) {
  return splitmix64(splitmix64(master) ^ splitmix64(replicate + 0x51ed270b0a5ULL));
}

inline std::uint64_t substream_seed(std::uint64_t base, std::string_view label,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = fnv1a64(label);
  h = splitmix64(h ^ splitmix64(base));
  h = splitmix64(h ^ splitmix64(a + 0x9e3779b9ULL));
  return splitmix64(h ^ splitmix64(b + 0x7f4a7c15ULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Hand-rolled draws: std::uniform_real_distribution and friends are
// implementation-defined, these keep streams stable across toolchains.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Box-Muller without the cached spare draw.
inline double normal01(std::mt19937_64& g) {
  double u1 = uniform01(g);
  double u2 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace risho
