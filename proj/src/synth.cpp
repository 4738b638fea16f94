#include "condtopics/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "condtopics/errors.hpp"
#include "condtopics/eval.hpp"
#include "condtopics/rng.hpp"

namespace condtopics {

namespace {

std::string padded_name(char prefix, std::size_t index, std::size_t n_total) {
  std::size_t width = 1;
  for (std::size_t v = n_total > 0 ? n_total - 1 : 0; v >= 10; v /= 10) {
    ++width;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, static_cast<int>(width),
                index);
  return buf;
}

}  // namespace

Matrix make_ground_truth_topics(std::uint32_t k, std::uint32_t v,
                                double concentration, std::uint64_t seed) {
  if (k < 1 || v < 2) throw ConfigError("need k >= 1 and v >= 2");
  if (!(concentration > 0.0)) {
    throw ConfigError("concentration must be positive");
  }
  Rng rng(seed);
  Matrix phi(k);
  for (auto& row : phi) row = rng.dirichlet(v, concentration);
  return phi;
}

SyntheticCorpus generate_corpus(const Matrix& phi_star,
                                const GeneratorConfig& config) {
  if (phi_star.empty() || config.n_patients < 1) {
    throw ConfigError("need at least one topic and one patient");
  }
  const std::size_t k = phi_star.size();
  const std::size_t v = phi_star[0].size();

  // Separate stream from the one that drew the topics.
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  SyntheticCorpus out;
  out.truth.phi_star = phi_star;
  out.truth.config = config;
  out.truth.codes.reserve(v);
  for (std::size_t w = 0; w < v; ++w) {
    out.truth.codes.push_back(padded_name('c', w, v));
  }

  EventLog& log = out.log;
  for (std::uint32_t d = 0; d < config.n_patients; ++d) {
    const auto theta =
        rng.dirichlet(k, config.doc_topic_concentration);
    const std::uint64_t length = rng.positive_neg_binomial(
        config.length_mean, config.length_dispersion);

    std::vector<std::uint64_t> counts(v, 0);
    for (std::uint64_t j = 0; j < length; ++j) {
      const std::size_t topic = rng.categorical(theta, 1.0);
      const std::size_t code = rng.categorical(phi_star[topic], 1.0);
      ++counts[code];
    }

    const std::string patient = padded_name('p', d, config.n_patients);
    for (std::size_t w = 0; w < v; ++w) {
      if (counts[w] == 0) continue;
      log.records.push_back({patient, out.truth.codes[w], counts[w]});
      log.total_occurrences += counts[w];
    }
    out.truth.theta_star.push_back(theta);
  }
  log.n_patients = config.n_patients;
  std::unordered_map<std::string, int> seen;
  for (const auto& r : log.records) seen.emplace(r.code, 0);
  log.n_codes = seen.size();

  out.corpus = build_matrix(log, build_vocabulary(log, 1.0));
  return out;
}

SyntheticCorpus generate_corpus(const GeneratorConfig& config) {
  const Matrix phi_star =
      make_ground_truth_topics(config.n_topics, config.vocab_size,
                               config.topic_concentration, config.seed);
  return generate_corpus(phi_star, config);
}

Matrix align_to_vocabulary(const GroundTruth& truth, const Vocabulary& vocab) {
  Matrix aligned(truth.phi_star.size(),
                 std::vector<double>(vocab.size(), 0.0));
  for (std::size_t w = 0; w < truth.codes.size(); ++w) {
    const auto it = vocab.index_of.find(truth.codes[w]);
    if (it == vocab.index_of.end()) continue;
    for (std::size_t t = 0; t < aligned.size(); ++t) {
      aligned[t][it->second] = truth.phi_star[t][w];
    }
  }
  for (auto& row : aligned) {
    double sum = 0.0;
    for (double x : row) sum += x;
    if (sum > 0.0) {
      for (auto& x : row) x /= sum;
    }
  }
  return aligned;
}

TopicMatching match_topics(const Matrix& phi_hat, const Matrix& phi_star) {
  if (phi_hat.empty() || phi_star.empty() ||
      phi_hat[0].size() != phi_star[0].size()) {
    throw DataError("topic matrices must share the vocabulary dimension");
  }
  const std::size_t kh = phi_hat.size();
  const std::size_t ks = phi_star.size();

  Matrix cost(kh, std::vector<double>(ks));
  for (std::size_t i = 0; i < kh; ++i) {
    for (std::size_t j = 0; j < ks; ++j) {
      cost[i][j] = jsd(phi_hat[i], phi_star[j]);
    }
  }

  struct Pair {
    std::size_t hat, star;
    double cost;
  };
  std::vector<Pair> pairs;
  std::vector<bool> used_hat(kh, false), used_star(ks, false);
  const std::size_t n_pairs = std::min(kh, ks);
  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < kh; ++i) {
      if (used_hat[i]) continue;
      for (std::size_t j = 0; j < ks; ++j) {
        if (used_star[j] || cost[i][j] >= best) continue;
        best = cost[i][j];
        bi = i;
        bj = j;
      }
    }
    used_hat[bi] = true;
    used_star[bj] = true;
    pairs.push_back({bi, bj, best});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.hat < b.hat; });

  TopicMatching matching;
  for (const auto& p : pairs) {
    matching.assignment.emplace_back(p.hat, p.star);
    matching.per_pair_jsd.push_back(p.cost);
    matching.mean_matched_jsd += p.cost;
  }
  matching.mean_matched_jsd /= static_cast<double>(n_pairs);
  return matching;
}

}  // namespace condtopics
