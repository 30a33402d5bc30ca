#pragma once

#include <cstdint>
#include <random>

namespace balance_assist {

/// splitmix64 step; used to derive independent stream seeds from a master
/// seed plus identifiers so trials stay reproducible in any execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(master ^ 0x853c49e6748fea9bULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ (b * 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ (c * 0xff51afd7ed558ccdULL));
  return s;
}

/// Deterministic double in [0, 1) from a 64-bit engine draw.
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on explicit uniform bits (keeps byte-level
/// reproducibility independent of the standard library's distribution
/// implementation).
inline double gauss(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Gaussian truncated to +-n_sigma, by rejection.
inline double gauss_truncated(std::mt19937_64& rng, double mean, double sd,
                              double n_sigma = 2.0) {
  if (sd <= 0.0) return mean;
  for (;;) {
    const double g = gauss(rng);
    if (std::abs(g) <= n_sigma) return mean + sd * g;
  }
}

}  // namespace balance_assist
