#pragma once

#include <cstdint>
#include <random>

namespace mmselect {

// All randomness in the library comes from std::mt19937_64, whose output
// sequence is fixed by the standard, reduced to a range by rejection sampling
// below. std::uniform_int_distribution is avoided because its output is
// implementation-defined.

/// Uniform integer in [0, bound), bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Reject the top (2^64 mod bound) outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one experiment cell: mix64(mix64(mix64(base) ^ a) ^ b).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(base) ^ a) ^ b);
}

}  // namespace mmselect
