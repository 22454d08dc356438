#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "rcurc/errors.hpp"

namespace rcurc {

/// Deterministic random source used everywhere randomness is needed.
///
/// The engine is std::mt19937_64, whose output stream is pinned bit-for-bit
/// by the C++ standard. The derived draws below are implemented by hand
/// (instead of std::*_distribution, whose output is implementation-defined)
/// so identical seeds give identical results on every platform:
///
///   * next_u64()       - one raw engine word.
///   * uniform_index(n) - unbiased rejection sampling on the top bits:
///                        mask = smallest 2^k-1 >= n-1; draw
///                        (next_u64() & mask) until the value is < n.
///   * uniform_real()   - (next_u64() >> 11) * 2^-53, uniform on [0,1).
///   * normal()         - Box-Muller on two uniform_real() draws (the first
///                        redrawn while it is exactly 0); produces a pair and
///                        caches the second value, so draws consume engine
///                        words only on every other call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw ArgumentError("Rng::uniform_index: n must be positive");
    std::uint64_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    std::uint64_t v;
    do {
      v = engine_() & mask;
    } while (v >= n);
    return v;
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_real();
    while (u1 == 0.0) u1 = uniform_real();
    const double u2 = uniform_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rcurc
