#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "condtopics/corpus.hpp"
#include "condtopics/rng.hpp"

namespace condtopics {

struct Hyperparameters {
  std::uint32_t n_topics = 0;
  double alpha = 0.0;  // patient-topic concentration, default 50/K
  double beta = 0.1;   // topic-code concentration
  std::uint32_t burn_in_sweeps = 4000;
  std::uint32_t n_saved_samples = 4000;
  std::uint32_t thinning_interval = 100;
  std::uint64_t seed = 0;

  static Hyperparameters defaults(std::uint32_t k) {
    Hyperparameters h;
    h.n_topics = k;
    h.alpha = 50.0 / k;
    return h;
  }

  void validate() const;
};

// Token-level assignments plus the sufficient-statistic count tables.
struct SamplerState {
  // per patient, one entry per token position; codes expanded in
  // vocabulary-index order with repeats consecutive
  std::vector<std::vector<std::uint32_t>> token_codes;
  std::vector<std::vector<std::uint32_t>> assignments;  // z, same shape

  std::vector<std::vector<std::uint32_t>> doc_topic;   // D x K
  std::vector<std::vector<std::uint32_t>> topic_code;  // K x V
  std::vector<std::uint64_t> topic_total;              // K
  std::uint64_t total_tokens = 0;
  std::uint64_t sweep_index = 0;
};

using Matrix = std::vector<std::vector<double>>;

struct TopicModel {
  Matrix phi;    // K x V
  Matrix theta;  // D x K
  Hyperparameters hyper;
  std::uint32_t n_samples_averaged = 0;
  std::uint64_t corpus_fingerprint = 0;
};

// Collapsed Gibbs chain over one corpus. Construction performs the seeded
// uniform initialization of the assignments; the chain is strictly
// sequential and confined to one thread.
class GibbsSampler {
 public:
  GibbsSampler(const PatientConditionsCorpus& corpus,
               const Hyperparameters& hyper);

  // Resamples every token once in the fixed deterministic order.
  void sweep();

  // Full conditional over topics for one token, current assignment
  // excluded from all counts. Sums to 1.
  std::vector<double> conditional_distribution(std::size_t patient,
                                               std::size_t position) const;

  Matrix estimate_phi() const;
  Matrix estimate_theta() const;

  // Collapsed joint log p(codes, assignments | hyper).
  double log_likelihood() const;

  const SamplerState& state() const { return state_; }
  const Hyperparameters& hyper() const { return hyper_; }

 private:
  Hyperparameters hyper_;
  std::size_t vocab_size_;
  SamplerState state_;
  Rng rng_;
  std::vector<double> weights_;  // scratch, length K
};

// Smoothed point estimates from raw count tables; the GibbsSampler
// methods delegate here.
Matrix estimate_phi(const SamplerState& state, const Hyperparameters& hyper,
                    std::size_t vocab_size);
Matrix estimate_theta(const SamplerState& state, const Hyperparameters& hyper);
double log_likelihood(const SamplerState& state, const Hyperparameters& hyper,
                      std::size_t vocab_size);

using ProgressSink =
    std::function<void(std::uint64_t sweep, double log_likelihood)>;

// Burn-in, then thinned sample collection; the returned model is the
// element-wise average of the saved phi/theta samples, rows renormalized.
TopicModel run(const PatientConditionsCorpus& corpus,
               const Hyperparameters& hyper, ProgressSink progress = {},
               std::uint32_t progress_cadence = 10);

}  // namespace condtopics
