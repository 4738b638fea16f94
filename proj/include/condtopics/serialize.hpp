#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>

#include "nlohmann/json.hpp"

#include "condtopics/corpus.hpp"
#include "condtopics/eval.hpp"
#include "condtopics/sampler.hpp"
#include "condtopics/synth.hpp"

namespace condtopics {

nlohmann::json to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

// Ordered code list plus a sparse (row, col, count) triplet list.
nlohmann::json to_json(const PatientConditionsCorpus& corpus);
PatientConditionsCorpus corpus_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Hyperparameters& hyper);
Hyperparameters hyperparameters_from_json(const nlohmann::json& j);

struct ModelFile {
  TopicModel model;
  std::vector<std::string> codes;  // vocabulary order behind phi columns
};

nlohmann::json to_json(const ModelFile& file, bool include_theta);
ModelFile model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DistanceMatrix& d);
nlohmann::json to_json(const DistinctivenessSummary& s);
nlohmann::json to_json(const TightnessReport& r);
nlohmann::json to_json(const CorpusStats& s);

nlohmann::json to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

// Event-log file format, CSV dialect with the count column.
void write_events_csv(const EventLog& log, std::ostream& out);

// Two-column `code,label` CSV with a header row.
std::unordered_map<std::string, std::string> read_label_map(
    const std::string& path);

// FNV-1a over the serialized corpus.
std::uint64_t corpus_fingerprint(const PatientConditionsCorpus& corpus);
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace condtopics
