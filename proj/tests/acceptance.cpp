// End-to-end acceptance suite; prints one PASS/FAIL line per criterion
// and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

#include "condtopics/corpus.hpp"
#include "condtopics/eval.hpp"
#include "condtopics/report.hpp"
#include "condtopics/rng.hpp"
#include "condtopics/sampler.hpp"
#include "condtopics/serialize.hpp"
#include "condtopics/synth.hpp"

namespace fs = std::filesystem;
using namespace condtopics;

namespace {

int failures = 0;

void verdict(int n, const std::string& name, bool ok,
             const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_cli(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = std::string(CONDTOPICS_CLI_PATH) + " " + args;
  if (!stdout_to.empty()) cmd += " > " + stdout_to.string();
  return std::system(cmd.c_str());
}

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> v(n, 0.0);
  double sum = 0.0;
  for (auto& x : v) {
    if (rng.uniform() < 0.3) continue;
    x = rng.uniform();
    sum += x;
  }
  if (sum == 0.0) {
    v[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : v) x /= sum;
  return v;
}

void criterion_1_jsd() {
  bool ok = true;
  std::string detail;
  const auto start = std::chrono::steady_clock::now();

  const std::vector<double> u{0.2, 0.5, 0.3};
  ok &= jsd(u, u) <= 1e-12;
  const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0}, half{0.5, 0.5};
  ok &= std::abs(jsd(e1, e2) - std::log(2.0)) <= 1e-12;
  ok &= std::abs(jsd(half, e1) - 0.215761) <= 1e-6;

  Rng rng(8881);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const std::size_t n = 2 + rng.uniform_int(40);
    const auto x = random_distribution(rng, n);
    const auto y = random_distribution(rng, n);
    const double d = jsd(x, y);
    ok &= d >= 0.0 && d <= std::log(2.0) + 1e-12;
    ok &= std::abs(d - jsd(y, x)) <= 1e-12;
  }

  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  if (elapsed >= 1.0) {
    ok = false;
    detail = "runtime " + std::to_string(elapsed) + "s";
  }
  verdict(1, "JSD correctness", ok, detail);
}

void criterion_2_sampler_soundness() {
  bool ok = true;
  const auto start = std::chrono::steady_clock::now();
  Rng meta(4242);
  for (int instance = 0; instance < 100 && ok; ++instance) {
    // random corpus up to 5 patients x 5 codes
    std::ostringstream body;
    body << "patient_id,code,count\n";
    const std::size_t rows = 1 + meta.uniform_int(12);
    for (std::size_t i = 0; i < rows; ++i) {
      body << 'p' << meta.uniform_int(5) << ",c" << meta.uniform_int(5) << ','
           << 1 + meta.uniform_int(3) << '\n';
    }
    std::istringstream in(body.str());
    const auto log = ingest_events(in, EventFormat::Csv);
    const auto corpus = build_matrix(log, build_vocabulary(log, 1.0));

    auto hyper = Hyperparameters::defaults(2 + meta.uniform_int(4));
    hyper.seed = instance;
    GibbsSampler sampler(corpus, hyper);
    for (int s = 0; s < 4 && ok; ++s) {
      sampler.sweep();
      const auto& state = sampler.state();
      // from-scratch recount
      std::vector<std::vector<std::uint32_t>> n_dt(
          state.assignments.size(),
          std::vector<std::uint32_t>(hyper.n_topics, 0));
      std::vector<std::vector<std::uint32_t>> n_tw(
          hyper.n_topics, std::vector<std::uint32_t>(corpus.n_codes(), 0));
      std::vector<std::uint64_t> n_t(hyper.n_topics, 0);
      for (std::size_t d = 0; d < state.assignments.size(); ++d) {
        for (std::size_t j = 0; j < state.assignments[d].size(); ++j) {
          const auto t = state.assignments[d][j];
          ++n_dt[d][t];
          ++n_tw[t][state.token_codes[d][j]];
          ++n_t[t];
        }
      }
      ok &= state.doc_topic == n_dt && state.topic_code == n_tw &&
            state.topic_total == n_t;
    }
    for (const auto& row : sampler.estimate_phi()) {
      double sum = 0.0;
      for (const double p : row) sum += p;
      ok &= std::abs(sum - 1.0) <= 1e-9;
    }
    for (const auto& row : sampler.estimate_theta()) {
      double sum = 0.0;
      for (const double p : row) sum += p;
      ok &= std::abs(sum - 1.0) <= 1e-9;
    }
  }
  const auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  verdict(2, "sampler count-table soundness", ok && elapsed < 30.0,
          "runtime " + std::to_string(elapsed) + "s");
}

// Shared fixture: pinned-seed synthetic corpus and recovered model used
// by criteria 3-5.
struct Recovery {
  SyntheticCorpus synth;
  TopicModel model;
  Matrix truth_aligned;
  TopicMatching matching;
};

Recovery run_recovery() {
  GeneratorConfig config;
  config.n_topics = 5;
  config.vocab_size = 50;
  config.n_patients = 2000;
  config.topic_concentration = 0.05;
  config.doc_topic_concentration = 0.3;
  config.length_mean = 100.0;
  config.length_dispersion = 10.0;
  config.seed = 42;

  Recovery r;
  r.synth = generate_corpus(config);

  auto hyper = Hyperparameters::defaults(5);
  hyper.burn_in_sweeps = 200;
  hyper.n_saved_samples = 50;
  hyper.thinning_interval = 5;
  hyper.seed = 42;
  r.model = run(r.synth.corpus, hyper);
  r.truth_aligned =
      align_to_vocabulary(r.synth.truth, r.synth.corpus.vocabulary);
  r.matching = match_topics(r.model.phi, r.truth_aligned);
  return r;
}

void criterion_3_recovery(const Recovery& r, double elapsed) {
  const double mean = r.matching.mean_matched_jsd;
  const double max = *std::max_element(r.matching.per_pair_jsd.begin(),
                                       r.matching.per_pair_jsd.end());
  std::ostringstream detail;
  detail << "mean JSD " << mean << ", max JSD " << max << ", runtime "
         << elapsed << "s";
  verdict(3, "synthetic topic recovery",
          mean < 0.15 && max < 0.25 && elapsed < 180.0, detail.str());
}

void criterion_4_tightness(const Recovery& r) {
  const auto report = tightness(r.model.phi, 0.01, 10);
  bool ok = true;
  double worst = 1.0;
  for (const auto& row : report.rows) {
    worst = std::min(worst, row.top_n_mass);
    ok &= row.top_n_mass > 0.9;
  }
  // uniform-row control
  const std::size_t v = 180;
  const Matrix uniform(1, std::vector<double>(v, 1.0 / v));
  ok &= tightness(uniform, 0.01, 10).rows[0].n_above_threshold == 0;
  verdict(4, "tightness semantics", ok,
          "min top-10 mass " + std::to_string(worst));
}

void criterion_5_distinctiveness(const Recovery& r) {
  Matrix basis(4, std::vector<double>(6, 0.0));
  for (std::size_t t = 0; t < 4; ++t) basis[t][t] = 1.0;
  const auto s = distinctiveness_summary(inter_topic_distances(basis));
  const double ln2 = std::log(2.0);
  bool ok = std::abs(s.mean - ln2) <= 1e-12 &&
            std::abs(s.median - ln2) <= 1e-12 && std::abs(s.min - ln2) <= 1e-12;

  const auto recovered =
      distinctiveness_summary(inter_topic_distances(r.model.phi));
  ok &= recovered.min > 0.3;
  verdict(5, "distinctiveness semantics", ok,
          "recovered min JSD " + std::to_string(recovered.min));
}

void criterion_6_vocabulary(const fs::path& dir) {
  // Ten head codes with the published frequencies plus a synthetic tail.
  const std::vector<std::pair<std::string, std::uint64_t>> head{
      {"1201005", 148424},  {"55822004", 82890},  {"44054006", 59156},
      {"235595009", 48731}, {"267432004", 47022}, {"414916001", 40499},
      {"61582004", 40066},  {"40930008", 39534},  {"53741008", 36795},
      {"271795006", 27581}};
  std::ofstream out(dir / "fixture_events.csv");
  out << "patient_id,code,count\n";
  std::uint64_t total = 0;
  for (const auto& [code, count] : head) {
    out << "p1," << code << ',' << count << '\n';
    total += count;
  }
  // tail: 60 rare codes, 2,000 occurrences each
  for (int i = 0; i < 60; ++i) {
    out << "p2,tail" << i << ",2000\n";
    total += 2000;
  }
  out.close();

  const auto log = ingest_events_file((dir / "fixture_events.csv").string());
  const auto vocab = build_vocabulary(log, 0.8);

  bool ok = vocab.codes.size() >= 2;
  ok &= vocab.codes[0] == "1201005" && vocab.frequencies[0] == 148424;
  ok &= vocab.coverage_achieved >= 0.8;
  // smallest sufficient prefix: one code fewer must fall short
  std::uint64_t prefix_minus_one = 0;
  for (std::size_t i = 0; i + 1 < vocab.codes.size(); ++i) {
    prefix_minus_one += vocab.frequencies[i];
  }
  ok &= static_cast<double>(prefix_minus_one) / total < 0.8;
  verdict(6, "vocabulary truncation on the published marginals", ok,
          std::to_string(vocab.codes.size()) + " codes retained");
}

void criterion_7_determinism(const fs::path& dir) {
  const std::string config = std::string(CONDTOPICS_CONFIG_DIR) + "/desk.json";
  bool ok = true;
  for (const std::string tag : {"a", "b"}) {
    const fs::path out = dir / ("run_" + tag);
    ok &= run_cli("synth --config " + config + " --out " + out.string()) == 0;
    ok &= run_cli("fit --config " + config + " --events " +
                  (out / "events.csv").string() + " --out " + out.string()) ==
          0;
    ok &= run_cli("eval --config " + config + " --model " +
                      (out / "model.json").string(),
                  out / "eval.txt") == 0;
  }
  for (const std::string name :
       {"events.csv", "ground_truth.json", "model.json", "trace.csv",
        "eval.txt"}) {
    const auto a = read_file(dir / "run_a" / name);
    const auto b = read_file(dir / "run_b" / name);
    if (a.empty() || a != b) {
      ok = false;
      std::cerr << "  mismatch or empty artifact: " << name << "\n";
    }
  }
  verdict(7, "pipeline determinism across runs", ok);
}

void criterion_8_report(const fs::path& dir) {
  // Topic A of the published table; entries nudged by +1e-4 so the
  // displayed 3-decimal values are unchanged while the top-10 sum
  // rounds to .989 as published.
  const std::vector<std::pair<std::string, double>> topic_a{
      {"44054006", 0.3691},  {"code1", 0.1321}, {"code2", 0.0991},
      {"code3", 0.0881},     {"code4", 0.0741}, {"code5", 0.0641},
      {"code6", 0.0631},     {"code7", 0.0381}, {"code8", 0.0321},
      {"code9", 0.0291}};
  const std::vector<std::string> labels{
      "Type 2 diabetes mellitus",
      "Type II diabetes mellitus uncontrolled",
      "Mixed hyperlipidemia",
      "Disorder associated with type 2 diabetes mellitus",
      "Neurologic disorder associated with type 2 diabetes mellitus",
      "Proteinuria",
      "Morbid obesity",
      "Benign essential hypertension",
      "Vitamin D deficiency",
      "Diabetic oculopathy associated with type 2 diabetes mellitus"};

  nlohmann::json model;
  model["hyper"] = {{"n_topics", 1}, {"alpha", 1.0}, {"beta", 0.1}};
  std::vector<std::string> codes;
  std::vector<double> phi_row;
  double mass = 0.0;
  for (const auto& [code, p] : topic_a) {
    codes.push_back(code);
    phi_row.push_back(p);
    mass += p;
  }
  codes.push_back("filler");
  phi_row.push_back(1.0 - mass);
  model["codes"] = codes;
  model["phi"] = std::vector<std::vector<double>>{phi_row};
  model["n_samples_averaged"] = 1;

  std::ofstream(dir / "tablefix_model.json") << model.dump(2);
  {
    std::ofstream out(dir / "labels.csv");
    out << "code,label\n";
    for (std::size_t i = 0; i < topic_a.size(); ++i) {
      out << topic_a[i].first << ',' << labels[i] << '\n';
    }
  }

  const int rc = run_cli("report --model " +
                             (dir / "tablefix_model.json").string() +
                             " --labels " + (dir / "labels.csv").string(),
                         dir / "report.txt");
  const std::string text = read_file(dir / "report.txt");

  // collapse runs of spaces before matching
  std::string squeezed;
  for (const char c : text) {
    if (c == ' ' && !squeezed.empty() && squeezed.back() == ' ') continue;
    squeezed += c;
  }
  const auto first_entry = squeezed.find("Type 2 diabetes mellitus .369");
  const auto footer = squeezed.find("CUMULATIVE PROBABILITY .989");
  const bool ok = rc == 0 && first_entry != std::string::npos &&
                  footer != std::string::npos &&
                  first_entry < squeezed.find(".132");
  verdict(8, "published-table report fidelity", ok);
}

}  // namespace

int main() {
  const fs::path dir =
      fs::temp_directory_path() / "condtopics_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  criterion_1_jsd();
  criterion_2_sampler_soundness();

  const auto start = std::chrono::steady_clock::now();
  const Recovery recovery = run_recovery();
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  criterion_3_recovery(recovery, elapsed);
  criterion_4_tightness(recovery);
  criterion_5_distinctiveness(recovery);
  criterion_6_vocabulary(dir);
  criterion_7_determinism(dir);
  criterion_8_report(dir);

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
