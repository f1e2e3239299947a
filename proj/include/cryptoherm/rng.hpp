#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cryptoherm {

/// Deterministic scalar stream for reproducible fixtures. Raw mt19937_64
/// bits are mapped to doubles explicitly (not through std distributions,
/// whose output is implementation-defined), so a seed produces the same
/// sequence on every platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box–Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  /// Standard complex normal CN(0,1): unit total variance.
  std::complex<double> complex_normal() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cryptoherm
