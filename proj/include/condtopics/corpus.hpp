#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace condtopics {

// One aggregated (patient, code) diagnosis count.
struct EventRecord {
  std::string patient_id;
  std::string code;
  std::uint64_t count = 0;
};

// Aggregated event stream, record order = first appearance of the
// (patient, code) pair in the source.
struct EventLog {
  std::vector<EventRecord> records;
  std::size_t n_patients = 0;
  std::size_t n_codes = 0;
  std::uint64_t total_occurrences = 0;
  std::size_t dropped_rows = 0;  // zero-count rows skipped during ingestion

  bool empty() const { return records.empty(); }
};

enum class EventFormat { Csv, JsonLines };

// Retained codes ordered by descending corpus frequency, ties broken
// lexicographically by code string.
struct Vocabulary {
  std::vector<std::string> codes;
  std::vector<std::uint64_t> frequencies;  // aligned with codes
  std::unordered_map<std::string, std::size_t> index_of;
  double coverage_achieved = 0.0;

  std::size_t size() const { return codes.size(); }
};

// Sparse patient-by-code count matrix. Row entries are sorted by
// vocabulary index; all retained rows have at least one token.
struct PatientConditionsCorpus {
  std::vector<std::string> patient_ids;
  Vocabulary vocabulary;
  // per patient: (vocab index, count) sorted by index
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;
  std::vector<std::uint64_t> row_totals;  // N_i
  std::uint64_t dropped_tokens = 0;       // out-of-vocabulary occurrences
  std::size_t dropped_patients = 0;       // all-zero rows after filtering

  std::size_t n_patients() const { return patient_ids.size(); }
  std::size_t n_codes() const { return vocabulary.size(); }
  std::uint64_t total_tokens() const;
};

struct CorpusStats {
  std::size_t n_patients = 0;
  std::size_t n_codes = 0;
  std::uint64_t total_tokens = 0;
  double mean_row_sum = 0.0;
  std::uint64_t min_row_sum = 0;
  std::uint64_t max_row_sum = 0;
  double sparsity = 0.0;  // fraction of zero cells
};

// Parses the delimited event format (header row `patient_id,code,count`,
// count optional) or the JSON-lines variant. Throws DataError naming the
// line on malformed rows, and on an empty source.
EventLog ingest_events(std::istream& source, EventFormat format);

// Ingests a file, picking the format from the extension
// (.jsonl / .ndjson -> JSON lines, otherwise CSV).
EventLog ingest_events_file(const std::string& path);

// Smallest frequency-descending prefix of codes whose cumulative
// occurrence fraction reaches `coverage`.
Vocabulary build_vocabulary(const EventLog& log, double coverage);

PatientConditionsCorpus build_matrix(const EventLog& log, const Vocabulary& vocab);

CorpusStats corpus_stats(const PatientConditionsCorpus& corpus);

}  // namespace condtopics
