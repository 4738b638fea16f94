#include "condtopics/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>

#include "condtopics/errors.hpp"
#include "nlohmann/json.hpp"

namespace condtopics {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t parse_count(const std::string& field, std::size_t line_no) {
  std::uint64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError("malformed count '" + field + "' at line " +
                    std::to_string(line_no));
  }
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

class LogBuilder {
 public:
  void add(std::string patient, std::string code, std::uint64_t count,
           std::size_t line_no) {
    if (patient.empty() || code.empty()) {
      throw DataError("empty patient_id or code at line " +
                      std::to_string(line_no));
    }
    if (count == 0) {
      ++log_.dropped_rows;
      return;
    }
    const std::string key = patient + '\x1f' + code;
    auto [it, inserted] = record_index_.emplace(key, log_.records.size());
    if (inserted) {
      log_.records.push_back({std::move(patient), std::move(code), count});
    } else {
      log_.records[it->second].count += count;
    }
    log_.total_occurrences += count;
  }

  EventLog finish() {
    if (log_.records.empty()) throw DataError("empty event log");
    std::unordered_map<std::string, int> patients, codes;
    for (const auto& r : log_.records) {
      patients.emplace(r.patient_id, 0);
      codes.emplace(r.code, 0);
    }
    log_.n_patients = patients.size();
    log_.n_codes = codes.size();
    return std::move(log_);
  }

 private:
  EventLog log_;
  std::unordered_map<std::string, std::size_t> record_index_;
};

EventLog ingest_csv(std::istream& source) {
  LogBuilder builder;
  std::string line;
  if (!std::getline(source, line)) throw DataError("empty event log");
  const auto header = split_csv_row(strip_cr(line));
  if (header.size() < 2 || header[0] != "patient_id" || header[1] != "code" ||
      (header.size() == 3 && header[2] != "count") || header.size() > 3) {
    throw DataError("bad header, expected 'patient_id,code[,count]'");
  }
  const bool has_count = header.size() == 3;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_row(line);
    if (fields.size() != header.size()) {
      throw DataError("expected " + std::to_string(header.size()) +
                      " columns at line " + std::to_string(line_no));
    }
    const std::uint64_t count =
        has_count ? parse_count(fields[2], line_no) : 1;
    builder.add(std::move(fields[0]), std::move(fields[1]), count, line_no);
  }
  return builder.finish();
}

EventLog ingest_jsonl(std::istream& source) {
  LogBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw DataError("malformed JSON at line " + std::to_string(line_no));
    }
    if (!row.is_object() || !row.contains("patient_id") ||
        !row.contains("code") || !row["patient_id"].is_string() ||
        !row["code"].is_string() ||
        (row.contains("count") && !row["count"].is_number_unsigned())) {
      throw DataError("malformed record at line " + std::to_string(line_no));
    }
    const std::uint64_t count = row.value("count", std::uint64_t{1});
    builder.add(row["patient_id"].get<std::string>(),
                row["code"].get<std::string>(), count, line_no);
  }
  return builder.finish();
}

}  // namespace

std::uint64_t PatientConditionsCorpus::total_tokens() const {
  return std::accumulate(row_totals.begin(), row_totals.end(), std::uint64_t{0});
}

EventLog ingest_events(std::istream& source, EventFormat format) {
  return format == EventFormat::Csv ? ingest_csv(source) : ingest_jsonl(source);
}

EventLog ingest_events_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open events file: " + path);
  const bool jsonl = path.ends_with(".jsonl") || path.ends_with(".ndjson");
  return ingest_events(in, jsonl ? EventFormat::JsonLines : EventFormat::Csv);
}

Vocabulary build_vocabulary(const EventLog& log, double coverage) {
  if (log.empty()) throw DataError("empty event log");
  if (!(coverage > 0.0 && coverage <= 1.0)) {
    throw ConfigError("coverage must be in (0, 1]");
  }
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& r : log.records) freq[r.code] += r.count;

  std::vector<std::pair<std::string, std::uint64_t>> order(freq.begin(),
                                                           freq.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  std::uint64_t covered = 0;
  const auto total = static_cast<double>(log.total_occurrences);
  for (const auto& [code, count] : order) {
    vocab.index_of.emplace(code, vocab.codes.size());
    vocab.codes.push_back(code);
    vocab.frequencies.push_back(count);
    covered += count;
    vocab.coverage_achieved = static_cast<double>(covered) / total;
    if (vocab.coverage_achieved >= coverage) break;
  }
  return vocab;
}

PatientConditionsCorpus build_matrix(const EventLog& log,
                                     const Vocabulary& vocab) {
  if (vocab.size() == 0) throw DataError("empty vocabulary");

  PatientConditionsCorpus corpus;
  corpus.vocabulary = vocab;

  // first-appearance patient order
  std::unordered_map<std::string, std::size_t> patient_index;
  std::vector<std::string> patients;
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> cells;
  for (const auto& r : log.records) {
    auto [it, inserted] = patient_index.emplace(r.patient_id, patients.size());
    if (inserted) {
      patients.push_back(r.patient_id);
      cells.emplace_back();
    }
    const auto v = vocab.index_of.find(r.code);
    if (v == vocab.index_of.end()) {
      corpus.dropped_tokens += r.count;
      continue;
    }
    cells[it->second][static_cast<std::uint32_t>(v->second)] +=
        static_cast<std::uint32_t>(r.count);
  }

  for (std::size_t p = 0; p < patients.size(); ++p) {
    if (cells[p].empty()) {
      ++corpus.dropped_patients;
      continue;
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> row(cells[p].begin(),
                                                             cells[p].end());
    std::sort(row.begin(), row.end());
    std::uint64_t total = 0;
    for (const auto& [idx, count] : row) total += count;
    corpus.patient_ids.push_back(patients[p]);
    corpus.rows.push_back(std::move(row));
    corpus.row_totals.push_back(total);
  }

  if (corpus.patient_ids.empty()) {
    throw DataError("no patient has any in-vocabulary code");
  }
  return corpus;
}

CorpusStats corpus_stats(const PatientConditionsCorpus& corpus) {
  CorpusStats stats;
  stats.n_patients = corpus.n_patients();
  stats.n_codes = corpus.n_codes();
  std::uint64_t nonzero_cells = 0;
  stats.min_row_sum = UINT64_MAX;
  for (std::size_t p = 0; p < corpus.rows.size(); ++p) {
    std::uint64_t row_sum = 0;
    for (const auto& [idx, count] : corpus.rows[p]) row_sum += count;
    nonzero_cells += corpus.rows[p].size();
    stats.total_tokens += row_sum;
    stats.min_row_sum = std::min(stats.min_row_sum, row_sum);
    stats.max_row_sum = std::max(stats.max_row_sum, row_sum);
  }
  if (stats.n_patients > 0) {
    stats.mean_row_sum =
        static_cast<double>(stats.total_tokens) / stats.n_patients;
    stats.sparsity = 1.0 - static_cast<double>(nonzero_cells) /
                               (static_cast<double>(stats.n_patients) *
                                static_cast<double>(stats.n_codes));
  } else {
    stats.min_row_sum = 0;
  }
  return stats;
}

}  // namespace condtopics
