#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "condtopics/corpus.hpp"
#include "condtopics/errors.hpp"
#include "condtopics/eval.hpp"
#include "condtopics/report.hpp"
#include "condtopics/sampler.hpp"
#include "condtopics/serialize.hpp"
#include "condtopics/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace condtopics;

namespace {

// Config file values with CLI-flag overrides; flags win over file values.
struct Options {
  std::string events;
  std::string model_path;
  std::string labels;
  std::string out_dir = ".";
  std::string format = "table";
  double coverage = 0.8;
  bool include_theta = false;
  std::uint32_t trace_cadence = 10;
  double eval_threshold = 0.01;
  std::size_t top_n = 10;
  json hyper_json = json::object();
  json synth_json = json::object();
  bool seed_set = false;
  std::uint64_t seed = 0;
};

Options load_config(int argc, char** argv) {
  Options opt;
  std::string path;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") path = argv[i + 1];
  }
  if (path.empty()) return opt;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("bad config file " + path + ": " + e.what());
  }
  opt.events = cfg.value("events", opt.events);
  opt.model_path = cfg.value("model", opt.model_path);
  opt.labels = cfg.value("labels", opt.labels);
  opt.out_dir = cfg.value("out", opt.out_dir);
  opt.format = cfg.value("format", opt.format);
  opt.coverage = cfg.value("coverage", opt.coverage);
  opt.include_theta = cfg.value("include_theta", opt.include_theta);
  opt.trace_cadence = cfg.value("trace_cadence", opt.trace_cadence);
  if (cfg.contains("eval")) {
    opt.eval_threshold = cfg["eval"].value("threshold", opt.eval_threshold);
    opt.top_n = cfg["eval"].value("top_n", opt.top_n);
  }
  if (cfg.contains("hyper")) opt.hyper_json = cfg["hyper"];
  if (cfg.contains("synth")) opt.synth_json = cfg["synth"];
  return opt;
}

void write_text_file(const fs::path& path, const std::string& content) {
  // Stage to a sibling temp file so failures leave no partial artifact.
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
  }
  fs::rename(tmp, path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("unparseable model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

Hyperparameters resolve_hyper(const Options& opt) {
  if (!opt.hyper_json.contains("n_topics")) {
    throw ConfigError("fit requires hyper.n_topics (--topics)");
  }
  Hyperparameters h = hyperparameters_from_json(opt.hyper_json);
  if (opt.seed_set) h.seed = opt.seed;
  h.validate();
  return h;
}

int cmd_fit(const Options& opt) {
  if (opt.events.empty()) throw ConfigError("fit requires an events file");
  const Hyperparameters hyper = resolve_hyper(opt);

  const EventLog log = ingest_events_file(opt.events);
  const Vocabulary vocab = build_vocabulary(log, opt.coverage);
  const PatientConditionsCorpus corpus = build_matrix(log, vocab);

  std::ostringstream trace;
  trace << "sweep_index,log_likelihood\n";
  const TopicModel model =
      run(corpus, hyper,
          [&trace](std::uint64_t sweep, double ll) {
            trace << sweep << ',' << ll << '\n';
          },
          opt.trace_cadence);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  write_text_file(dir / "model.json",
                  to_json(ModelFile{model, vocab.codes}, opt.include_theta)
                      .dump(2));
  write_text_file(dir / "trace.csv", trace.str());
  std::cout << "model written to " << (dir / "model.json").string() << "\n";
  return 0;
}

int cmd_report(const Options& opt) {
  const ModelFile file = load_model(opt.model_path);
  LabelMap labels;
  if (!opt.labels.empty()) labels = read_label_map(opt.labels);
  const auto report =
      build_topic_report(file.model.phi, file.codes, labels, opt.top_n);
  if (opt.format == "json") {
    std::cout << topic_report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << render_topic_report_table(report);
  }
  return 0;
}

int cmd_eval(const Options& opt) {
  const ModelFile file = load_model(opt.model_path);
  const DistanceMatrix distances = inter_topic_distances(file.model.phi);
  const DistinctivenessSummary summary = distinctiveness_summary(distances);
  const TightnessReport tight =
      tightness(file.model.phi, opt.eval_threshold, opt.top_n);

  if (opt.format == "json") {
    std::cout << json{{"distinctiveness", to_json(summary)},
                      {"distances", to_json(distances)},
                      {"tightness", to_json(tight)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "mean=" << summary.mean << " median=" << summary.median
              << " min=" << summary.min << "\n\n";
    std::cout << "topic  n_above_threshold  top_" << tight.top_n << "_mass\n";
    for (const auto& row : tight.rows) {
      std::printf("%5zu  %17zu  %10.4f\n", row.topic, row.n_above_threshold,
                  row.top_n_mass);
    }
  }
  return 0;
}

int cmd_synth(const Options& opt) {
  GeneratorConfig config = generator_config_from_json(opt.synth_json);
  if (opt.seed_set) config.seed = opt.seed;
  const SyntheticCorpus synth = generate_corpus(config);

  fs::create_directories(opt.out_dir);
  const fs::path dir(opt.out_dir);
  std::ostringstream events;
  write_events_csv(synth.log, events);
  write_text_file(dir / "events.csv", events.str());
  write_text_file(dir / "ground_truth.json", to_json(synth.truth).dump(2));
  std::cout << "synthetic corpus written to " << dir.string() << "\n";
  return 0;
}

int cmd_stats(const Options& opt) {
  if (opt.events.empty()) throw ConfigError("stats requires an events file");
  const EventLog log = ingest_events_file(opt.events);
  const Vocabulary vocab = build_vocabulary(log, opt.coverage);
  const CorpusStats stats = corpus_stats(build_matrix(log, vocab));
  if (opt.format == "json") {
    std::cout << to_json(stats).dump(2) << "\n";
  } else {
    std::cout << "patients      " << stats.n_patients << "\n"
              << "codes         " << stats.n_codes << "\n"
              << "total tokens  " << stats.total_tokens << "\n"
              << "row sum       mean " << stats.mean_row_sum << " min "
              << stats.min_row_sum << " max " << stats.max_row_sum << "\n"
              << "sparsity      " << stats.sparsity << "\n"
              << "coverage      " << vocab.coverage_achieved << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent-topic discovery in patient condition-code corpora"};
  app.require_subcommand(1);

  Options opt;
  try {
    opt = load_config(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string config_path;  // consumed by load_config, declared for parsing

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--format", opt.format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    cmd->add_option("--seed", opt.seed, "RNG seed")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
  };

  auto* fit = app.add_subcommand("fit", "fit a topic model to an event log");
  add_common(fit);
  fit->add_option("--events", opt.events, "events file (CSV or JSON lines)");
  fit->add_option("--coverage", opt.coverage,
                  "vocabulary cumulative-frequency coverage");
  fit->add_option("--topics", [&opt](const CLI::results_t& r) {
    opt.hyper_json["n_topics"] = std::stoul(r[0]);
    return true;
  }, "number of topics");
  fit->add_option("--alpha", [&opt](const CLI::results_t& r) {
    opt.hyper_json["alpha"] = std::stod(r[0]);
    return true;
  }, "patient-topic concentration (default 50/K)");
  fit->add_option("--beta", [&opt](const CLI::results_t& r) {
    opt.hyper_json["beta"] = std::stod(r[0]);
    return true;
  }, "topic-code concentration");
  fit->add_option("--burn-in", [&opt](const CLI::results_t& r) {
    opt.hyper_json["burn_in_sweeps"] = std::stoul(r[0]);
    return true;
  }, "burn-in sweeps");
  fit->add_option("--samples", [&opt](const CLI::results_t& r) {
    opt.hyper_json["n_saved_samples"] = std::stoul(r[0]);
    return true;
  }, "saved posterior samples");
  fit->add_option("--thin", [&opt](const CLI::results_t& r) {
    opt.hyper_json["thinning_interval"] = std::stoul(r[0]);
    return true;
  }, "sweeps between saved samples");
  fit->add_flag("--theta", opt.include_theta,
                "include patient-topic rows in the model file");

  auto* report = app.add_subcommand("report", "top-code table per topic");
  add_common(report);
  report->add_option("--model", opt.model_path, "model JSON file");
  report->add_option("--labels", opt.labels, "code,label CSV");
  report->add_option("--top-n", opt.top_n, "codes listed per topic");

  auto* eval = app.add_subcommand("eval", "tightness and distinctiveness");
  add_common(eval);
  eval->add_option("--model", opt.model_path, "model JSON file");
  eval->add_option("--threshold", opt.eval_threshold,
                   "tightness probability threshold");
  eval->add_option("--top-n", opt.top_n, "codes per topic for top mass");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  add_common(synth);
  synth->add_option("--topics", [&opt](const CLI::results_t& r) {
    opt.synth_json["n_topics"] = std::stoul(r[0]);
    return true;
  }, "ground-truth topics");
  synth->add_option("--vocab", [&opt](const CLI::results_t& r) {
    opt.synth_json["vocab_size"] = std::stoul(r[0]);
    return true;
  }, "vocabulary size");
  synth->add_option("--patients", [&opt](const CLI::results_t& r) {
    opt.synth_json["n_patients"] = std::stoul(r[0]);
    return true;
  }, "number of patients");

  auto* stats = app.add_subcommand("stats", "corpus summary statistics");
  add_common(stats);
  stats->add_option("--events", opt.events, "events file");
  stats->add_option("--coverage", opt.coverage, "vocabulary coverage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(opt);
    if (report->parsed()) return cmd_report(opt);
    if (eval->parsed()) return cmd_eval(opt);
    if (synth->parsed()) return cmd_synth(opt);
    if (stats->parsed()) return cmd_stats(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
