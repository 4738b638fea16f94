#include "condtopics/sampler.hpp"

#include <cmath>

#include "condtopics/errors.hpp"
#include "condtopics/serialize.hpp"

namespace condtopics {

void Hyperparameters::validate() const {
  // K = 1 is degenerate but well-defined; eval rejects it where pairs
  // are required.
  if (n_topics < 1) throw ConfigError("n_topics must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (n_saved_samples < 1) throw ConfigError("n_saved_samples must be >= 1");
  if (thinning_interval < 1) throw ConfigError("thinning_interval must be >= 1");
}

GibbsSampler::GibbsSampler(const PatientConditionsCorpus& corpus,
                           const Hyperparameters& hyper)
    : hyper_(hyper), vocab_size_(corpus.n_codes()), rng_(hyper.seed) {
  hyper_.validate();
  if (corpus.n_patients() == 0) throw DataError("empty corpus");

  const std::size_t n_docs = corpus.n_patients();
  const std::uint32_t k = hyper_.n_topics;

  state_.token_codes.resize(n_docs);
  state_.assignments.resize(n_docs);
  state_.doc_topic.assign(n_docs, std::vector<std::uint32_t>(k, 0));
  state_.topic_code.assign(k, std::vector<std::uint32_t>(vocab_size_, 0));
  state_.topic_total.assign(k, 0);

  for (std::size_t d = 0; d < n_docs; ++d) {
    auto& codes = state_.token_codes[d];
    auto& z = state_.assignments[d];
    codes.reserve(corpus.row_totals[d]);
    for (const auto& [code, count] : corpus.rows[d]) {
      for (std::uint32_t c = 0; c < count; ++c) codes.push_back(code);
    }
    z.resize(codes.size());
    for (std::size_t j = 0; j < codes.size(); ++j) {
      const std::uint32_t topic = rng_.uniform_int(k);
      z[j] = topic;
      ++state_.doc_topic[d][topic];
      ++state_.topic_code[topic][codes[j]];
      ++state_.topic_total[topic];
    }
    state_.total_tokens += codes.size();
  }
  weights_.resize(k);
}

void GibbsSampler::sweep() {
  const std::uint32_t k = hyper_.n_topics;
  const double v_beta = static_cast<double>(vocab_size_) * hyper_.beta;
  for (std::size_t d = 0; d < state_.token_codes.size(); ++d) {
    auto& codes = state_.token_codes[d];
    auto& z = state_.assignments[d];
    auto& n_dt = state_.doc_topic[d];
    for (std::size_t j = 0; j < codes.size(); ++j) {
      const std::uint32_t w = codes[j];
      const std::uint32_t old_topic = z[j];
      --n_dt[old_topic];
      --state_.topic_code[old_topic][w];
      --state_.topic_total[old_topic];

      double total = 0.0;
      for (std::uint32_t t = 0; t < k; ++t) {
        const double weight =
            (n_dt[t] + hyper_.alpha) *
            (state_.topic_code[t][w] + hyper_.beta) /
            (static_cast<double>(state_.topic_total[t]) + v_beta);
        weights_[t] = weight;
        total += weight;
      }
      const auto new_topic =
          static_cast<std::uint32_t>(rng_.categorical(weights_, total));

      z[j] = new_topic;
      ++n_dt[new_topic];
      ++state_.topic_code[new_topic][w];
      ++state_.topic_total[new_topic];
    }
  }
  ++state_.sweep_index;
}

std::vector<double> GibbsSampler::conditional_distribution(
    std::size_t patient, std::size_t position) const {
  if (patient >= state_.token_codes.size() ||
      position >= state_.token_codes[patient].size()) {
    throw ConfigError("token index out of range");
  }
  const std::uint32_t k = hyper_.n_topics;
  const std::uint32_t w = state_.token_codes[patient][position];
  const std::uint32_t cur = state_.assignments[patient][position];
  const double v_beta = static_cast<double>(vocab_size_) * hyper_.beta;

  std::vector<double> probs(k);
  double total = 0.0;
  for (std::uint32_t t = 0; t < k; ++t) {
    const double excl = t == cur ? 1.0 : 0.0;
    probs[t] = (state_.doc_topic[patient][t] - excl + hyper_.alpha) *
               (state_.topic_code[t][w] - excl + hyper_.beta) /
               (static_cast<double>(state_.topic_total[t]) - excl + v_beta);
    total += probs[t];
  }
  for (auto& p : probs) p /= total;
  return probs;
}

Matrix estimate_phi(const SamplerState& state, const Hyperparameters& hyper,
                    std::size_t vocab_size) {
  const std::uint32_t k = hyper.n_topics;
  const double v_beta = static_cast<double>(vocab_size) * hyper.beta;
  Matrix phi(k, std::vector<double>(vocab_size));
  for (std::uint32_t t = 0; t < k; ++t) {
    const double denom = static_cast<double>(state.topic_total[t]) + v_beta;
    for (std::size_t w = 0; w < vocab_size; ++w) {
      phi[t][w] = (state.topic_code[t][w] + hyper.beta) / denom;
    }
  }
  return phi;
}

Matrix estimate_theta(const SamplerState& state,
                      const Hyperparameters& hyper) {
  const std::uint32_t k = hyper.n_topics;
  const double k_alpha = static_cast<double>(k) * hyper.alpha;
  Matrix theta(state.doc_topic.size(), std::vector<double>(k));
  for (std::size_t d = 0; d < state.doc_topic.size(); ++d) {
    const double n_d = static_cast<double>(state.token_codes[d].size());
    for (std::uint32_t t = 0; t < k; ++t) {
      theta[d][t] = (state.doc_topic[d][t] + hyper.alpha) / (n_d + k_alpha);
    }
  }
  return theta;
}

double log_likelihood(const SamplerState& state, const Hyperparameters& hyper,
                      std::size_t vocab_size) {
  const std::uint32_t k = hyper.n_topics;
  const double v = static_cast<double>(vocab_size);
  double ll = 0.0;
  // topic-code Dirichlet-multinomial normalizers
  for (std::uint32_t t = 0; t < k; ++t) {
    ll += std::lgamma(v * hyper.beta) - v * std::lgamma(hyper.beta);
    for (std::size_t w = 0; w < vocab_size; ++w) {
      ll += std::lgamma(state.topic_code[t][w] + hyper.beta);
    }
    ll -= std::lgamma(static_cast<double>(state.topic_total[t]) +
                      v * hyper.beta);
  }
  // patient-topic Dirichlet-multinomial normalizers
  const double kd = static_cast<double>(k);
  for (std::size_t d = 0; d < state.doc_topic.size(); ++d) {
    ll += std::lgamma(kd * hyper.alpha) - kd * std::lgamma(hyper.alpha);
    for (std::uint32_t t = 0; t < k; ++t) {
      ll += std::lgamma(state.doc_topic[d][t] + hyper.alpha);
    }
    ll -= std::lgamma(static_cast<double>(state.token_codes[d].size()) +
                      kd * hyper.alpha);
  }
  return ll;
}

Matrix GibbsSampler::estimate_phi() const {
  return condtopics::estimate_phi(state_, hyper_, vocab_size_);
}

Matrix GibbsSampler::estimate_theta() const {
  return condtopics::estimate_theta(state_, hyper_);
}

double GibbsSampler::log_likelihood() const {
  return condtopics::log_likelihood(state_, hyper_, vocab_size_);
}

namespace {

void renormalize_rows(Matrix& m) {
  for (auto& row : m) {
    double sum = 0.0;
    for (double x : row) sum += x;
    for (auto& x : row) x /= sum;
  }
}

void accumulate(Matrix& acc, const Matrix& sample) {
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = 0; j < sample[i].size(); ++j) {
      acc[i][j] += sample[i][j];
    }
  }
}

}  // namespace

TopicModel run(const PatientConditionsCorpus& corpus,
               const Hyperparameters& hyper, ProgressSink progress,
               std::uint32_t progress_cadence) {
  GibbsSampler sampler(corpus, hyper);

  const auto report = [&](std::uint64_t sweep) {
    if (progress && progress_cadence > 0 && sweep % progress_cadence == 0) {
      progress(sweep, sampler.log_likelihood());
    }
  };

  for (std::uint32_t s = 0; s < hyper.burn_in_sweeps; ++s) {
    sampler.sweep();
    report(sampler.state().sweep_index);
  }

  Matrix phi_acc(hyper.n_topics, std::vector<double>(corpus.n_codes(), 0.0));
  Matrix theta_acc(corpus.n_patients(),
                   std::vector<double>(hyper.n_topics, 0.0));
  std::uint32_t saved = 0;
  std::uint32_t since_save = 0;
  while (saved < hyper.n_saved_samples) {
    sampler.sweep();
    report(sampler.state().sweep_index);
    if (++since_save == hyper.thinning_interval) {
      since_save = 0;
      accumulate(phi_acc, sampler.estimate_phi());
      accumulate(theta_acc, sampler.estimate_theta());
      ++saved;
    }
  }

  TopicModel model;
  model.phi = std::move(phi_acc);
  model.theta = std::move(theta_acc);
  renormalize_rows(model.phi);
  renormalize_rows(model.theta);
  model.hyper = hyper;
  model.n_samples_averaged = saved;
  model.corpus_fingerprint = corpus_fingerprint(corpus);
  return model;
}

}  // namespace condtopics
