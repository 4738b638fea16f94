#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "nlohmann/json.hpp"

#include "condtopics/sampler.hpp"

namespace condtopics {

struct TopicReportEntry {
  std::string code;
  std::string label;  // code itself when no label map entry exists
  double probability = 0.0;
};

struct TopicReportRow {
  std::size_t topic = 0;
  std::vector<TopicReportEntry> entries;  // descending probability
  double cumulative_probability = 0.0;
};

using LabelMap = std::unordered_map<std::string, std::string>;

std::vector<TopicReportRow> build_topic_report(const Matrix& phi,
                                               const std::vector<std::string>& codes,
                                               const LabelMap& labels,
                                               std::size_t top_n);

// Probability rendered to 3 decimals without a leading zero (".369").
std::string format_probability(double p);

// Per-topic blocks of ranked (condition, probability) pairs with a
// cumulative row at the bottom of each.
std::string render_topic_report_table(const std::vector<TopicReportRow>& rows);

nlohmann::json topic_report_to_json(const std::vector<TopicReportRow>& rows);

}  // namespace condtopics
