#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "condtopics/sampler.hpp"

namespace condtopics {

// Symmetric K x K matrix of pairwise inter-topic distances, zero diagonal.
struct DistanceMatrix {
  std::size_t k = 0;
  Matrix values;
};

struct DistinctivenessSummary {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
};

struct TightnessRow {
  std::size_t topic = 0;
  std::size_t n_above_threshold = 0;
  double top_n_mass = 0.0;
};

struct TightnessReport {
  double threshold = 0.01;
  std::size_t top_n = 10;
  std::vector<TightnessRow> rows;
};

// Jensen-Shannon divergence in natural log, range [0, ln 2]. Inputs are
// renormalized when within 1e-6 of summing to 1 and rejected otherwise;
// zero entries contribute zero by the limit convention.
double jsd(std::span<const double> x, std::span<const double> y);

DistanceMatrix inter_topic_distances(const Matrix& phi);

// Mean/median/min over the K(K-1)/2 distinct pairs.
DistinctivenessSummary distinctiveness_summary(const DistanceMatrix& d);

// Per topic: count of entries strictly above the threshold and the total
// mass of the top_n most probable codes (boundary ties broken by
// vocabulary index).
TightnessReport tightness(const Matrix& phi, double threshold = 0.01,
                          std::size_t top_n = 10);

}  // namespace condtopics
