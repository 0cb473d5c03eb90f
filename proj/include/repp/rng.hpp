// Seeding and variate generation with fully specified bit behaviour.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Conversions to real variates are done here rather than through
// <random> distributions, which are implementation defined.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace repp {

using Engine = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for ensemble member `index` (or sub-stream `index`) of `master`.
/// derive_seed(m, i) = mix64(mix64(m) ^ mix64(i + 0x632be59bd9b4e019)).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform on [0,1) with 53 random bits.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0,1]; never returns 0 so log() is safe.
inline double uniform01_open_low(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

/// Exp(rate) by inverse CDF.
inline double exponential(Engine& eng, double rate) {
  return -std::log(uniform01_open_low(eng)) / rate;
}

/// Bernoulli(p).
inline bool bernoulli(Engine& eng, double p) { return uniform01(eng) < p; }

/// Geometric on {1,2,...} with success probability p, by inverse CDF.
inline std::uint64_t geometric(Engine& eng, double p) {
  if (p >= 1.0) return 1;
  const double u = uniform01_open_low(eng);
  return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

/// Poisson(mean) by sequential inversion; adequate for the small means used
/// in tests and calibration runs.
inline std::uint64_t poisson(Engine& eng, double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 30.0) {
    // Sum of exponential gaps stays exact for large means.
    std::uint64_t k = 0;
    double t = exponential(eng, 1.0);
    while (t < mean) {
      ++k;
      t += exponential(eng, 1.0);
    }
    return k;
  }
  const double u = uniform01(eng);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf && k < 10000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

}  // namespace repp
