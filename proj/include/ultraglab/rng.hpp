#pragma once

/// Counter-based random numbers. Every draw is a pure function of
/// (seed, counter), so noise batteries reproduce bit-identically across
/// platforms, runs and thread counts.

#include <cmath>
#include <cstdint>

namespace ultraglab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

struct CounterRng {
  std::uint64_t seed = 0;

  /// Uniform in (0, 1), 53-bit resolution.
  double uniform(std::uint64_t counter) const {
    const std::uint64_t h = detail::splitmix64(detail::splitmix64(seed) ^ counter);
    return (double(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  /// Standard normal via Box-Muller on two decorrelated uniforms.
  double normal(std::uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

}  // namespace ultraglab
