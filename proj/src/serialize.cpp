#include "condtopics/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "condtopics/errors.hpp"

namespace condtopics {

using nlohmann::json;

namespace {

json require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw DataError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t code_list_hash(const std::vector<std::string>& codes) {
  std::string joined;
  for (const auto& c : codes) {
    joined += c;
    joined += '\n';
  }
  return fnv1a(joined);
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json to_json(const Vocabulary& vocab) {
  return json{{"codes", vocab.codes},
              {"frequencies", vocab.frequencies},
              {"coverage_achieved", vocab.coverage_achieved}};
}

Vocabulary vocabulary_from_json(const json& j) {
  Vocabulary v;
  require(j, "codes").get_to(v.codes);
  require(j, "frequencies").get_to(v.frequencies);
  v.coverage_achieved = require(j, "coverage_achieved").get<double>();
  if (v.codes.size() != v.frequencies.size()) {
    throw DataError("codes/frequencies length mismatch");
  }
  for (std::size_t i = 0; i < v.codes.size(); ++i) {
    if (!v.index_of.emplace(v.codes[i], i).second) {
      throw DataError("duplicate vocabulary code: " + v.codes[i]);
    }
  }
  return v;
}

json to_json(const PatientConditionsCorpus& corpus) {
  json cells = json::array();
  for (std::size_t p = 0; p < corpus.rows.size(); ++p) {
    for (const auto& [idx, count] : corpus.rows[p]) {
      cells.push_back({p, idx, count});
    }
  }
  return json{{"patient_ids", corpus.patient_ids},
              {"vocabulary", to_json(corpus.vocabulary)},
              {"cells", std::move(cells)},
              {"dropped_tokens", corpus.dropped_tokens},
              {"dropped_patients", corpus.dropped_patients}};
}

PatientConditionsCorpus corpus_from_json(const json& j) {
  PatientConditionsCorpus corpus;
  require(j, "patient_ids").get_to(corpus.patient_ids);
  corpus.vocabulary = vocabulary_from_json(require(j, "vocabulary"));
  corpus.dropped_tokens = j.value("dropped_tokens", std::uint64_t{0});
  corpus.dropped_patients = j.value("dropped_patients", std::size_t{0});
  corpus.rows.resize(corpus.patient_ids.size());
  corpus.row_totals.assign(corpus.patient_ids.size(), 0);
  for (const auto& cell : require(j, "cells")) {
    const auto p = cell.at(0).get<std::size_t>();
    const auto w = cell.at(1).get<std::uint32_t>();
    const auto c = cell.at(2).get<std::uint32_t>();
    if (p >= corpus.rows.size() || w >= corpus.vocabulary.size() || c == 0) {
      throw DataError("bad corpus cell");
    }
    corpus.rows[p].emplace_back(w, c);
    corpus.row_totals[p] += c;
  }
  for (std::size_t p = 0; p < corpus.rows.size(); ++p) {
    if (corpus.row_totals[p] == 0) {
      throw DataError("all-zero patient row in corpus file");
    }
  }
  return corpus;
}

json to_json(const Hyperparameters& hyper) {
  return json{{"n_topics", hyper.n_topics},
              {"alpha", hyper.alpha},
              {"beta", hyper.beta},
              {"burn_in_sweeps", hyper.burn_in_sweeps},
              {"n_saved_samples", hyper.n_saved_samples},
              {"thinning_interval", hyper.thinning_interval},
              {"seed", hyper.seed},
              {"rng", "mt19937_64"}};
}

Hyperparameters hyperparameters_from_json(const json& j) {
  const auto k = require(j, "n_topics").get<std::uint32_t>();
  Hyperparameters h = Hyperparameters::defaults(k > 0 ? k : 1);
  h.n_topics = k;
  if (j.contains("alpha")) h.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) h.beta = j.at("beta").get<double>();
  if (j.contains("burn_in_sweeps")) {
    h.burn_in_sweeps = j.at("burn_in_sweeps").get<std::uint32_t>();
  }
  if (j.contains("n_saved_samples")) {
    h.n_saved_samples = j.at("n_saved_samples").get<std::uint32_t>();
  }
  if (j.contains("thinning_interval")) {
    h.thinning_interval = j.at("thinning_interval").get<std::uint32_t>();
  }
  if (j.contains("seed")) h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

json to_json(const ModelFile& file, bool include_theta) {
  json j{{"hyper", to_json(file.model.hyper)},
         {"codes", file.codes},
         {"code_list_hash", hash_hex(code_list_hash(file.codes))},
         {"phi", file.model.phi},
         {"n_samples_averaged", file.model.n_samples_averaged},
         {"corpus_fingerprint", hash_hex(file.model.corpus_fingerprint)}};
  if (include_theta) j["theta"] = file.model.theta;
  return j;
}

ModelFile model_from_json(const json& j) {
  ModelFile file;
  file.model.hyper = hyperparameters_from_json(require(j, "hyper"));
  require(j, "codes").get_to(file.codes);
  require(j, "phi").get_to(file.model.phi);
  if (j.contains("theta")) j.at("theta").get_to(file.model.theta);
  file.model.n_samples_averaged = j.value("n_samples_averaged", 1u);
  if (j.contains("corpus_fingerprint")) {
    file.model.corpus_fingerprint = std::stoull(
        j.at("corpus_fingerprint").get<std::string>(), nullptr, 16);
  }
  for (const auto& row : file.model.phi) {
    if (row.size() != file.codes.size()) {
      throw DataError("phi row length does not match code list");
    }
  }
  return file;
}

json to_json(const DistanceMatrix& d) {
  return json{{"k", d.k}, {"values", d.values}};
}

json to_json(const DistinctivenessSummary& s) {
  return json{{"mean", s.mean}, {"median", s.median}, {"min", s.min}};
}

json to_json(const TightnessReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"topic", row.topic},
                    {"n_above_threshold", row.n_above_threshold},
                    {"top_n_mass", row.top_n_mass}});
  }
  return json{
      {"threshold", r.threshold}, {"top_n", r.top_n}, {"rows", rows}};
}

json to_json(const CorpusStats& s) {
  return json{{"n_patients", s.n_patients},
              {"n_codes", s.n_codes},
              {"total_tokens", s.total_tokens},
              {"mean_row_sum", s.mean_row_sum},
              {"min_row_sum", s.min_row_sum},
              {"max_row_sum", s.max_row_sum},
              {"sparsity", s.sparsity}};
}

json to_json(const GeneratorConfig& config) {
  return json{{"n_topics", config.n_topics},
              {"vocab_size", config.vocab_size},
              {"n_patients", config.n_patients},
              {"topic_concentration", config.topic_concentration},
              {"doc_topic_concentration", config.doc_topic_concentration},
              {"length_mean", config.length_mean},
              {"length_dispersion", config.length_dispersion},
              {"seed", config.seed}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  c.n_topics = j.value("n_topics", c.n_topics);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.n_patients = j.value("n_patients", c.n_patients);
  c.topic_concentration = j.value("topic_concentration", c.topic_concentration);
  c.doc_topic_concentration =
      j.value("doc_topic_concentration", c.doc_topic_concentration);
  c.length_mean = j.value("length_mean", c.length_mean);
  c.length_dispersion = j.value("length_dispersion", c.length_dispersion);
  c.seed = j.value("seed", c.seed);
  return c;
}

json to_json(const GroundTruth& truth) {
  return json{{"config", to_json(truth.config)},
              {"codes", truth.codes},
              {"phi_star", truth.phi_star},
              {"theta_star", truth.theta_star}};
}

GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth truth;
  truth.config = generator_config_from_json(require(j, "config"));
  require(j, "codes").get_to(truth.codes);
  require(j, "phi_star").get_to(truth.phi_star);
  require(j, "theta_star").get_to(truth.theta_star);
  return truth;
}

void write_events_csv(const EventLog& log, std::ostream& out) {
  out << "patient_id,code,count\n";
  for (const auto& r : log.records) {
    out << r.patient_id << ',' << r.code << ',' << r.count << '\n';
  }
}

std::unordered_map<std::string, std::string> read_label_map(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label map: " + path);
  std::unordered_map<std::string, std::string> labels;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty label map: " + path);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto pos = line.find(',');
    if (pos == std::string::npos || pos == 0) {
      throw DataError("malformed label map row at line " +
                      std::to_string(line_no));
    }
    labels[line.substr(0, pos)] = line.substr(pos + 1);
  }
  return labels;
}

std::uint64_t corpus_fingerprint(const PatientConditionsCorpus& corpus) {
  return fnv1a(to_json(corpus).dump());
}

}  // namespace condtopics
