#pragma once

#include <cmath>
#include <cstdint>

namespace noteffect::sim {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draws: the value depends only on the key, never on how many
// draws happened before, so paired runs share random numbers exactly.
constexpr std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (c + 0x2545f4914f6cdd1dULL));
  return h;
}

// Uniform on the open interval (0, 1).
constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
  return (static_cast<double>(keyed_bits(seed, a, b, c) >> 11) + 0.5) * 0x1.0p-53;
}

inline double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
  const double u1 = keyed_uniform(seed, a, b, 2 * c);
  const double u2 = keyed_uniform(seed, a, b, 2 * c + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace noteffect::sim
