#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "loglshd/config.hpp"
#include "loglshd/lsh_cluster.hpp"
#include "loglshd/metrics.hpp"
#include "loglshd/pipeline.hpp"
#include "loglshd/synthetic.hpp"
#include "loglshd/template_extract.hpp"
#include "loglshd/text.hpp"

namespace py = pybind11;
using namespace loglshd;

namespace {

MismatchPolicy parse_policy(const std::string& name) {
  if (name == "skip") return MismatchPolicy::Skip;
  if (name == "whole-line") return MismatchPolicy::WholeLine;
  throw std::invalid_argument("on_mismatch must be 'skip' or 'whole-line'");
}

py::dict report_dict(const EvaluationReport& r) {
  py::dict d;
  d["dataset"] = r.dataset;
  d["ga"] = r.ga;
  d["pa"] = r.pa;
  d["fga"] = r.fga.f1;
  d["pga"] = r.fga.precision;
  d["rga"] = r.fga.recall;
  d["fta"] = r.fta.f1;
  d["pta"] = r.fta.precision;
  d["rta"] = r.fta.recall;
  d["parsing_time_s"] = r.parsing_time_s;
  d["template_density"] = r.template_density;
  d["n_logs"] = r.n_logs;
  d["n_predicted_templates"] = r.n_predicted_templates;
  d["n_truth_templates"] = r.n_truth_templates;
  d["config"] = r.config;
  return d;
}

py::list sweep_list(const std::vector<SweepRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["label"] = r.label;
    d["threshold"] = r.threshold;
    d["strategy"] = r.strategy;
    d["ga"] = r.ga;
    d["pa"] = r.pa;
    d["parsing_time_s"] = r.parsing_time_s;
    d["initial_groups"] = r.initial_groups;
    d["clusters"] = r.clusters;
    d["templates"] = r.templates;
    d["error"] = r.error.empty() ? py::object(py::none()) : py::cast(r.error);
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Log template extraction: grouping, MinHash LSH merging, DTW templates";

  py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("dataset", &RunConfig::dataset)
      .def_readwrite("log_path", &RunConfig::log_path)
      .def_readwrite("log_format", &RunConfig::log_format)
      .def_readwrite("preprocess_patterns", &RunConfig::preprocess_patterns)
      .def_property(
          "strategy", [](const RunConfig& c) { return c.strategy.to_string(); },
          [](RunConfig& c, const std::string& s) { c.strategy = GroupingStrategy::parse(s); })
      .def_readwrite("jaccard_threshold", &RunConfig::jaccard_threshold)
      .def_readwrite("signature_length", &RunConfig::signature_length)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("sample_size", &RunConfig::sample_size)
      .def_readwrite("dtw_band", &RunConfig::dtw_band)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("ground_truth", &RunConfig::ground_truth)
      .def_readwrite("threads", &RunConfig::threads)
      .def_property(
          "on_mismatch",
          [](const RunConfig& c) {
            return c.on_mismatch == MismatchPolicy::Skip ? "skip" : "whole-line";
          },
          [](RunConfig& c, const std::string& s) { c.on_mismatch = parse_policy(s); })
      .def("validate", &RunConfig::validate)
      .def("describe", &RunConfig::describe);

  m.def(
      "run_pipeline",
      [](const RunConfig& config) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_pipeline(config);
        }
        py::dict d;
        py::list rows;
        for (const auto& row : r.output.rows) {
          rows.append(py::make_tuple(row.line_id, row.content, row.event_id, row.event_template));
        }
        py::list templates;
        for (const auto& t : r.output.templates) {
          templates.append(py::make_tuple(t.event_id, t.event_template, t.occurrences));
        }
        d["rows"] = rows;
        d["templates"] = templates;
        d["report"] = r.report ? py::object(report_dict(*r.report)) : py::object(py::none());
        d["parsing_time_s"] = r.parsing_time_s;
        d["initial_groups"] = r.initial_groups;
        d["clusters"] = r.clusters;
        d["skipped_lines"] = r.rejects.skipped_lines;
        d["structured_path"] = r.structured_path;
        d["templates_path"] = r.templates_path;
        return d;
      },
      py::arg("config"),
      "Run the full pipeline. Returns a dict with rows (line_id, content, event_id, "
      "template), templates (event_id, template, occurrences) and the report when "
      "ground truth is configured.");

  m.def(
      "sweep_thresholds",
      [](const RunConfig& base, std::optional<std::vector<double>> thresholds) {
        const auto list = thresholds.value_or(default_threshold_sweep());
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep_thresholds(base, list);
        }
        return sweep_list(rows);
      },
      py::arg("config"), py::arg("thresholds") = py::none());

  m.def(
      "sweep_strategies",
      [](const RunConfig& base, std::optional<std::vector<std::string>> names) {
        std::vector<GroupingStrategy> list;
        if (names) {
          for (const auto& n : *names) list.push_back(GroupingStrategy::parse(n));
        } else {
          list = default_strategy_sweep();
        }
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep_strategies(base, list);
        }
        return sweep_list(rows);
      },
      py::arg("config"), py::arg("strategies") = py::none());

  m.def(
      "evaluate",
      [](const TemplateMap& predicted, const TemplateMap& truth) {
        return report_dict(evaluate(predicted, truth));
      },
      py::arg("predicted"), py::arg("truth"),
      "Metrics for two {line_id: template} maps covering the same line ids.");
  m.def(
      "grouping_accuracy",
      [](const TemplateMap& predicted, const TemplateMap& truth) {
        return grouping_accuracy(partition_by_template(predicted), partition_by_template(truth));
      },
      py::arg("predicted"), py::arg("truth"));
  m.def("parsing_accuracy", &parsing_accuracy, py::arg("predicted"), py::arg("truth"));
  m.def("normalize_template", &normalize_template, py::arg("text"));

  m.def("shingles_of", &shingles_of, py::arg("content"),
        "Tokens of a content that pass the alphabetic shingle filter.");
  m.def(
      "minhash",
      [](const ShingleSet& s, std::size_t d, std::uint64_t seed) {
        return minhash(s, d, seed).values;
      },
      py::arg("shingles"), py::arg("signature_length") = 50, py::arg("seed") = 0);
  m.def(
      "estimate_jaccard",
      [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
        return estimate_jaccard(MinHashSignature{a}, MinHashSignature{b});
      },
      py::arg("a"), py::arg("b"));
  m.def("exact_jaccard", &exact_jaccard, py::arg("a"), py::arg("b"));
  m.def(
      "optimize_bands",
      [](std::size_t d, double threshold) {
        const BandLayout l = optimize_bands(d, threshold);
        return py::make_tuple(l.bands, l.rows);
      },
      py::arg("signature_length"), py::arg("threshold"), "Returns (bands, rows).");
  m.def(
      "candidate_probability",
      [](double s, std::size_t bands, std::size_t rows) {
        return candidate_probability(s, BandLayout{bands, rows});
      },
      py::arg("similarity"), py::arg("bands"), py::arg("rows"));

  m.def(
      "dtw_cost",
      [](const std::string& a, const std::string& b, std::optional<std::size_t> band) {
        return dtw_align(text::decode_utf8(a), text::decode_utf8(b), band).cost;
      },
      py::arg("a"), py::arg("b"), py::arg("band") = py::none());
  m.def(
      "common_skeleton",
      [](const std::vector<std::string>& contents, std::optional<std::size_t> band) {
        return common_skeleton(contents, band);
      },
      py::arg("contents"), py::arg("band") = py::none());
  m.def("merge_placeholders", &merge_placeholders, py::arg("text"));
  m.def("event_id_for", &event_id_for, py::arg("template"));

  m.def(
      "generate_synthetic",
      [](const std::filesystem::path& dir, const std::string& name, std::size_t n_templates,
         std::size_t logs_per_template, std::size_t slots, std::size_t min_words,
         std::size_t max_words, const std::string& alphabet, std::size_t pool,
         std::uint64_t seed) {
        SyntheticSpec spec;
        spec.n_templates = n_templates;
        spec.logs_per_template = logs_per_template;
        spec.slots_per_template = slots;
        spec.min_words = min_words;
        spec.max_words = max_words;
        spec.alphabet = parse_alphabet(alphabet);
        spec.alphabetic_pool = pool;
        spec.seed = seed;
        const SyntheticCorpus corpus = generate_synthetic(spec);
        const SyntheticFiles files = write_synthetic(corpus, dir, name);
        py::dict d;
        d["log"] = files.log;
        d["ground_truth"] = files.ground_truth;
        d["log_format"] = corpus.log_format;
        d["templates"] = corpus.templates;
        return d;
      },
      py::arg("output_dir"), py::arg("name") = "synthetic", py::arg("n_templates") = 20,
      py::arg("logs_per_template") = 500, py::arg("slots_per_template") = 2,
      py::arg("min_words") = 4, py::arg("max_words") = 10, py::arg("alphabet") = "numeric",
      py::arg("alphabetic_pool") = 6, py::arg("seed") = 0,
      "Write <name>.log and <name>_structured.csv under output_dir.");

  m.def("preset_threshold", &preset_threshold, py::arg("preset"), py::arg("dataset"));
}
