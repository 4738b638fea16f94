#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "condtopics/corpus.hpp"
#include "condtopics/sampler.hpp"

namespace condtopics {

struct GeneratorConfig {
  std::uint32_t n_topics = 5;
  std::uint32_t vocab_size = 50;
  std::uint32_t n_patients = 2000;
  double topic_concentration = 0.05;  // Dirichlet over codes per topic
  double doc_topic_concentration = 0.3;
  double length_mean = 100.0;
  double length_dispersion = 10.0;
  std::uint64_t seed = 0;
};

// True topics and mixtures behind a synthetic corpus. phi_star columns are
// in generator code order (`codes`), which generally differs from the
// frequency-sorted order of the realized corpus vocabulary.
struct GroundTruth {
  Matrix phi_star;             // K* x V
  Matrix theta_star;           // D x K*
  std::vector<std::string> codes;
  GeneratorConfig config;
};

struct SyntheticCorpus {
  EventLog log;
  PatientConditionsCorpus corpus;
  GroundTruth truth;
};

struct TopicMatching {
  // recovered topic index -> matched ground-truth topic index
  std::vector<std::pair<std::size_t, std::size_t>> assignment;
  std::vector<double> per_pair_jsd;
  double mean_matched_jsd = 0.0;
};

// One row per topic from a symmetric Dirichlet with the given
// concentration; small values yield sparse, well-separated topics.
Matrix make_ground_truth_topics(std::uint32_t k, std::uint32_t v,
                                double concentration, std::uint64_t seed);

// Executes the generative process: per document a Dirichlet mixture over
// topics, per token a topic then a code. Document lengths are
// overdispersed counts with zeros resampled.
SyntheticCorpus generate_corpus(const GeneratorConfig& config);

// Same process with caller-supplied true topics; config.n_topics and
// config.vocab_size are ignored in favor of phi_star's shape.
SyntheticCorpus generate_corpus(const Matrix& phi_star,
                                const GeneratorConfig& config);

// Ground-truth rows with columns permuted into the given vocabulary's
// order; codes absent from the vocabulary are dropped and rows
// renormalized (their mass is negligible by construction).
Matrix align_to_vocabulary(const GroundTruth& truth, const Vocabulary& vocab);

// Greedy matching on the pairwise JSD cost matrix: repeatedly take the
// globally smallest unmatched (recovered, truth) pair.
TopicMatching match_topics(const Matrix& phi_hat, const Matrix& phi_star);

}  // namespace condtopics
