#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tntomo/common.hpp"

namespace tntomo {

/// SplitMix64 finalizer. Used to derive statistically independent child seeds
/// from a master seed plus a stream index, so that parallel and serial
/// execution consume identical random streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random stream. Gaussian variates use an explicit Box-Muller
/// transform instead of std::normal_distribution so that output depends only
/// on the engine, not on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  /// Standard complex Gaussian: Re, Im ~ N(0, 1/2) so E|z|^2 = 1.
  cplx gaussian_cplx() {
    const double s = std::sqrt(0.5);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

  /// Uniform integer in [0, n). Rejection-sampled, unbiased.
  std::uint64_t uniform_int(std::uint64_t n) {
    require(n > 0, "uniform_int: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Index into a discrete distribution given cumulative weights.
  std::size_t discrete(const double* cumulative, std::size_t n) {
    const double total = cumulative[n - 1];
    const double x = uniform01() * total;
    for (std::size_t i = 0; i < n; ++i) {
      if (x < cumulative[i]) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tntomo
