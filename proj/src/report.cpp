#include "condtopics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "condtopics/errors.hpp"

namespace condtopics {

std::vector<TopicReportRow> build_topic_report(
    const Matrix& phi, const std::vector<std::string>& codes,
    const LabelMap& labels, std::size_t top_n) {
  std::vector<TopicReportRow> report;
  for (std::size_t t = 0; t < phi.size(); ++t) {
    const auto& row = phi[t];
    if (row.size() != codes.size()) {
      throw DataError("phi row length does not match code list");
    }
    const std::size_t n = std::min(top_n, row.size());

    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&row](std::size_t a, std::size_t b) {
                       return row[a] > row[b];
                     });

    TopicReportRow out;
    out.topic = t;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& code = codes[order[i]];
      const auto it = labels.find(code);
      out.entries.push_back(
          {code, it == labels.end() ? code : it->second, row[order[i]]});
      out.cumulative_probability += row[order[i]];
    }
    report.push_back(std::move(out));
  }
  return report;
}

std::string format_probability(double p) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  std::string s = buf;
  if (s.size() > 1 && s[0] == '0') s.erase(0, 1);
  return s;
}

std::string render_topic_report_table(
    const std::vector<TopicReportRow>& rows) {
  static const std::string kFooter = "CUMULATIVE PROBABILITY";
  std::ostringstream out;
  for (const auto& row : rows) {
    std::size_t width = kFooter.size();
    for (const auto& e : row.entries) {
      width = std::max(width, e.label.size());
    }
    out << "Topic " << row.topic << '\n';
    for (const auto& e : row.entries) {
      out << "  " << e.label << std::string(width - e.label.size() + 2, ' ')
          << format_probability(e.probability) << '\n';
    }
    out << "  " << kFooter << std::string(width - kFooter.size() + 2, ' ')
        << format_probability(row.cumulative_probability) << "\n\n";
  }
  return out.str();
}

nlohmann::json topic_report_to_json(const std::vector<TopicReportRow>& rows) {
  nlohmann::json topics = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : row.entries) {
      entries.push_back({{"code", e.code},
                         {"label", e.label},
                         {"probability", e.probability}});
    }
    topics.push_back({{"topic", row.topic},
                      {"entries", entries},
                      {"cumulative_probability", row.cumulative_probability}});
  }
  return nlohmann::json{{"topics", topics}};
}

}  // namespace condtopics
