#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace condtopics {

// Seedable generator used everywhere results must replay bit-for-bit.
// The engine is mt19937_64 and every sampling routine is implemented here
// rather than via std::*_distribution, whose output differs across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), n >= 1.
  std::uint32_t uniform_int(std::uint32_t n) {
    auto v = static_cast<std::uint32_t>(uniform() * n);
    return v < n ? v : n - 1;
  }

  double normal();

  // Gamma(shape, 1), shape > 0. Marsaglia-Tsang.
  double gamma(double shape);

  // Symmetric Dirichlet of dimension n with the given concentration.
  std::vector<double> dirichlet(std::size_t n, double concentration);

  // Index drawn proportionally to non-negative weights summing to total.
  std::size_t categorical(std::span<const double> weights, double total);

  std::uint64_t poisson(double mean);

  // Negative-binomial-shaped count with the given mean and dispersion
  // (gamma-Poisson mixture); zero draws are resampled.
  std::uint64_t positive_neg_binomial(double mean, double dispersion);

 private:
  std::mt19937_64 engine_;
};

}  // namespace condtopics
