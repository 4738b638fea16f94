#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "condtopics/corpus.hpp"
#include "condtopics/errors.hpp"
#include "condtopics/eval.hpp"
#include "condtopics/report.hpp"
#include "condtopics/sampler.hpp"
#include "condtopics/serialize.hpp"
#include "condtopics/synth.hpp"

namespace py = pybind11;
using namespace condtopics;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Latent-topic discovery in condition-code corpora";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<EventLog>(m, "EventLog")
      .def_readonly("n_patients", &EventLog::n_patients)
      .def_readonly("n_codes", &EventLog::n_codes)
      .def_readonly("total_occurrences", &EventLog::total_occurrences)
      .def_readonly("dropped_rows", &EventLog::dropped_rows);

  py::class_<Vocabulary>(m, "Vocabulary")
      .def_readonly("codes", &Vocabulary::codes)
      .def_readonly("frequencies", &Vocabulary::frequencies)
      .def_readonly("coverage_achieved", &Vocabulary::coverage_achieved);

  py::class_<PatientConditionsCorpus>(m, "PatientConditionsCorpus")
      .def_readonly("patient_ids", &PatientConditionsCorpus::patient_ids)
      .def_readonly("vocabulary", &PatientConditionsCorpus::vocabulary)
      .def_readonly("row_totals", &PatientConditionsCorpus::row_totals)
      .def_readonly("dropped_tokens", &PatientConditionsCorpus::dropped_tokens)
      .def("total_tokens", &PatientConditionsCorpus::total_tokens);

  py::class_<CorpusStats>(m, "CorpusStats")
      .def_readonly("n_patients", &CorpusStats::n_patients)
      .def_readonly("n_codes", &CorpusStats::n_codes)
      .def_readonly("total_tokens", &CorpusStats::total_tokens)
      .def_readonly("mean_row_sum", &CorpusStats::mean_row_sum)
      .def_readonly("min_row_sum", &CorpusStats::min_row_sum)
      .def_readonly("max_row_sum", &CorpusStats::max_row_sum)
      .def_readonly("sparsity", &CorpusStats::sparsity);

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init(&Hyperparameters::defaults), py::arg("n_topics"))
      .def_readwrite("n_topics", &Hyperparameters::n_topics)
      .def_readwrite("alpha", &Hyperparameters::alpha)
      .def_readwrite("beta", &Hyperparameters::beta)
      .def_readwrite("burn_in_sweeps", &Hyperparameters::burn_in_sweeps)
      .def_readwrite("n_saved_samples", &Hyperparameters::n_saved_samples)
      .def_readwrite("thinning_interval", &Hyperparameters::thinning_interval)
      .def_readwrite("seed", &Hyperparameters::seed);

  py::class_<TopicModel>(m, "TopicModel")
      .def_readonly("phi", &TopicModel::phi)
      .def_readonly("theta", &TopicModel::theta)
      .def_readonly("n_samples_averaged", &TopicModel::n_samples_averaged)
      .def_readonly("corpus_fingerprint", &TopicModel::corpus_fingerprint);

  py::class_<DistinctivenessSummary>(m, "DistinctivenessSummary")
      .def_readonly("mean", &DistinctivenessSummary::mean)
      .def_readonly("median", &DistinctivenessSummary::median)
      .def_readonly("min", &DistinctivenessSummary::min);

  py::class_<TightnessRow>(m, "TightnessRow")
      .def_readonly("topic", &TightnessRow::topic)
      .def_readonly("n_above_threshold", &TightnessRow::n_above_threshold)
      .def_readonly("top_n_mass", &TightnessRow::top_n_mass);

  py::class_<TightnessReport>(m, "TightnessReport")
      .def_readonly("threshold", &TightnessReport::threshold)
      .def_readonly("top_n", &TightnessReport::top_n)
      .def_readonly("rows", &TightnessReport::rows);

  py::class_<GeneratorConfig>(m, "GeneratorConfig")
      .def(py::init<>())
      .def_readwrite("n_topics", &GeneratorConfig::n_topics)
      .def_readwrite("vocab_size", &GeneratorConfig::vocab_size)
      .def_readwrite("n_patients", &GeneratorConfig::n_patients)
      .def_readwrite("topic_concentration", &GeneratorConfig::topic_concentration)
      .def_readwrite("doc_topic_concentration",
                     &GeneratorConfig::doc_topic_concentration)
      .def_readwrite("length_mean", &GeneratorConfig::length_mean)
      .def_readwrite("length_dispersion", &GeneratorConfig::length_dispersion)
      .def_readwrite("seed", &GeneratorConfig::seed);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def_readonly("phi_star", &GroundTruth::phi_star)
      .def_readonly("theta_star", &GroundTruth::theta_star)
      .def_readonly("codes", &GroundTruth::codes);

  py::class_<SyntheticCorpus>(m, "SyntheticCorpus")
      .def_readonly("corpus", &SyntheticCorpus::corpus)
      .def_readonly("truth", &SyntheticCorpus::truth);

  py::class_<TopicMatching>(m, "TopicMatching")
      .def_readonly("assignment", &TopicMatching::assignment)
      .def_readonly("per_pair_jsd", &TopicMatching::per_pair_jsd)
      .def_readonly("mean_matched_jsd", &TopicMatching::mean_matched_jsd);

  m.def("ingest_events_file", &ingest_events_file, py::arg("path"));
  m.def(
      "ingest_events_text",
      [](const std::string& text, bool jsonl) {
        std::istringstream in(text);
        return ingest_events(in, jsonl ? EventFormat::JsonLines
                                       : EventFormat::Csv);
      },
      py::arg("text"), py::arg("jsonl") = false);
  m.def("build_vocabulary", &build_vocabulary, py::arg("log"),
        py::arg("coverage"));
  m.def("build_matrix", &build_matrix, py::arg("log"), py::arg("vocab"));
  m.def("corpus_stats", &corpus_stats, py::arg("corpus"));

  m.def(
      "fit",
      [](const PatientConditionsCorpus& corpus, const Hyperparameters& hyper) {
        py::gil_scoped_release release;
        return run(corpus, hyper);
      },
      py::arg("corpus"), py::arg("hyper"));

  m.def(
      "jsd",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return jsd(x, y);
      },
      py::arg("x"), py::arg("y"));
  m.def("inter_topic_distances",
        [](const Matrix& phi) { return inter_topic_distances(phi).values; },
        py::arg("phi"));
  m.def(
      "distinctiveness_summary",
      [](const Matrix& phi) {
        return distinctiveness_summary(inter_topic_distances(phi));
      },
      py::arg("phi"));
  m.def("tightness", &tightness, py::arg("phi"), py::arg("threshold") = 0.01,
        py::arg("top_n") = 10);

  m.def("make_ground_truth_topics", &make_ground_truth_topics, py::arg("k"),
        py::arg("v"), py::arg("concentration"), py::arg("seed"));
  m.def("generate_corpus",
        py::overload_cast<const GeneratorConfig&>(&generate_corpus),
        py::arg("config"));
  m.def("align_to_vocabulary", &align_to_vocabulary, py::arg("truth"),
        py::arg("vocab"));
  m.def("match_topics", &match_topics, py::arg("phi_hat"),
        py::arg("phi_star"));
}
