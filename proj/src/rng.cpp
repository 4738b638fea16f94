#include "condtopics/rng.hpp"

#include <cmath>

#include "condtopics/errors.hpp"

namespace condtopics {

double Rng::normal() {
  // Box-Muller without caching the second variate, so the draw count per
  // call is fixed and replay does not depend on call history.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
  if (shape <= 0.0) throw InternalError("gamma shape must be positive");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

std::vector<double> Rng::dirichlet(std::size_t n, double concentration) {
  std::vector<double> out(n);
  double sum = 0.0;
  for (auto& x : out) {
    x = gamma(concentration);
    sum += x;
  }
  if (sum <= 0.0) {
    // All gamma draws underflowed; fall back to one-hot on a uniform index.
    out.assign(n, 0.0);
    out[uniform_int(static_cast<std::uint32_t>(n))] = 1.0;
    return out;
  }
  for (auto& x : out) x /= sum;
  return out;
}

std::size_t Rng::categorical(std::span<const double> weights, double total) {
  const double target = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

std::uint64_t Rng::poisson(double mean) {
  std::uint64_t count = 0;
  // Knuth's method, splitting large means to keep exp(-mean) representable.
  while (mean > 500.0) {
    count += poisson(500.0);
    mean -= 500.0;
  }
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::uint64_t k = 0;
  do {
    ++k;
    p *= uniform();
  } while (p > limit);
  return count + k - 1;
}

std::uint64_t Rng::positive_neg_binomial(double mean, double dispersion) {
  for (;;) {
    const double rate = gamma(dispersion) * (mean / dispersion);
    const std::uint64_t n = poisson(rate);
    if (n >= 1) return n;
  }
}

}  // namespace condtopics
