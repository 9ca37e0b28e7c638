#ifndef MTCLUST_RNG_HPP
#define MTCLUST_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace mtclust {

/// Seeded random source with pinned sampling algorithms.
///
/// std::*_distribution output is implementation-defined, so the transforms
/// are spelled out here; the same seed gives the same stream on every
/// platform the project builds on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two draws.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

  /// Uniform integer in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % n;
  }

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mtclust

#endif  // MTCLUST_RNG_HPP
