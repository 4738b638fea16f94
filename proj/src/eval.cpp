#include "condtopics/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "condtopics/errors.hpp"

namespace condtopics {

namespace {

std::vector<double> checked_distribution(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) {
    if (x < 0.0) throw DataError("negative probability entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw DataError("vector does not sum to 1");
  }
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x /= sum;
  return out;
}

}  // namespace

double jsd(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw DataError("jsd requires two non-empty vectors of equal length");
  }
  const auto p = checked_distribution(x);
  const auto q = checked_distribution(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) acc += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) acc += 0.5 * q[i] * std::log(q[i] / m);
  }
  return std::max(acc, 0.0);
}

DistanceMatrix inter_topic_distances(const Matrix& phi) {
  DistanceMatrix d;
  d.k = phi.size();
  d.values.assign(d.k, std::vector<double>(d.k, 0.0));
  for (std::size_t i = 0; i < d.k; ++i) {
    for (std::size_t j = i + 1; j < d.k; ++j) {
      const double v = jsd(phi[i], phi[j]);
      d.values[i][j] = v;
      d.values[j][i] = v;
    }
  }
  return d;
}

DistinctivenessSummary distinctiveness_summary(const DistanceMatrix& d) {
  if (d.k < 2) throw DataError("no distinct pairs");
  std::vector<double> pairs;
  pairs.reserve(d.k * (d.k - 1) / 2);
  for (std::size_t i = 0; i < d.k; ++i) {
    for (std::size_t j = i + 1; j < d.k; ++j) {
      pairs.push_back(d.values[i][j]);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  DistinctivenessSummary s;
  s.min = pairs.front();
  s.mean = std::accumulate(pairs.begin(), pairs.end(), 0.0) / pairs.size();
  const std::size_t n = pairs.size();
  s.median = n % 2 == 1 ? pairs[n / 2]
                        : 0.5 * (pairs[n / 2 - 1] + pairs[n / 2]);
  return s;
}

TightnessReport tightness(const Matrix& phi, double threshold,
                          std::size_t top_n) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must be in (0, 1)");
  }
  TightnessReport report;
  report.threshold = threshold;
  report.top_n = top_n;
  for (std::size_t t = 0; t < phi.size(); ++t) {
    const auto& row = phi[t];
    if (top_n < 1 || top_n > row.size()) {
      throw ConfigError("top_n must be in [1, V]");
    }
    TightnessRow r;
    r.topic = t;
    r.n_above_threshold = static_cast<std::size_t>(
        std::count_if(row.begin(), row.end(),
                      [threshold](double p) { return p > threshold; }));

    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // descending probability, ties by vocabulary index
    std::stable_sort(order.begin(), order.end(),
                     [&row](std::size_t a, std::size_t b) {
                       return row[a] > row[b];
                     });
    for (std::size_t i = 0; i < top_n; ++i) r.top_n_mass += row[order[i]];
    report.rows.push_back(r);
  }
  return report;
}

}  // namespace condtopics
