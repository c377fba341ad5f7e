#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loglshd/config.hpp"
#include "loglshd/csv.hpp"
#include "loglshd/pipeline.hpp"
#include "loglshd/synthetic.hpp"

namespace fs = std::filesystem;
using namespace loglshd;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

// Thrown for bad flag values or combinations discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw flags shared by parse and the sweeps. Unset optionals fall back to the
// config file section, then to the built-in defaults.
struct RunFlags {
  std::string log;
  std::string dataset;
  std::optional<std::string> log_format;
  std::vector<std::string> regex;
  std::optional<std::string> config;
  std::optional<std::string> strategy;
  std::optional<double> threshold;
  std::optional<std::string> preset;
  std::size_t signature_length = 50;
  std::uint64_t seed = 0;
  std::size_t sample_size = 10;
  std::string dtw_band = "none";
  std::string output_dir = "loglshd_out";
  std::optional<std::string> ground_truth;
  std::size_t threads = 1;
  std::string on_mismatch = "skip";
};

void add_run_options(CLI::App* app, RunFlags& f) {
  app->add_option("--log", f.log, "Raw log file")->required();
  app->add_option("--dataset", f.dataset,
                  "Dataset name, used for output file names and config lookup");
  app->add_option("--log-format", f.log_format,
                  "Header format, e.g. '<Date> <Time> <Level> <Content>'");
  app->add_option("--regex", f.regex,
                  "Preprocessing pattern replaced by <*> (repeatable, applied in order)");
  app->add_option("--config", f.config, "JSON config with per-dataset settings");
  app->add_option("--strategy,--grouping", f.strategy,
                  "Initial grouping strategy, e.g. base+first+p25+p50");
  app->add_option("--jaccard-threshold", f.threshold, "Merge threshold in (0, 1] (default 0.9)");
  app->add_option("--threshold-preset", f.preset,
                  "Per-dataset threshold preset (loghub2)")
      ->check(CLI::IsMember({"loghub2"}));
  app->add_option("--signature-length", f.signature_length, "MinHash signature length")
      ->capture_default_str();
  app->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app->add_option("--sample-size", f.sample_size, "Lines sampled per cluster for templates")
      ->capture_default_str();
  app->add_option("--dtw-band", f.dtw_band, "Sakoe-Chiba band width, or none")
      ->capture_default_str();
  app->add_option("--output-dir", f.output_dir, "Directory for CSV outputs")
      ->capture_default_str();
  app->add_option("--ground-truth", f.ground_truth,
                  "Structured CSV with an EventTemplate column; enables evaluation");
  app->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  app->add_option("--on-mismatch", f.on_mismatch,
                  "Lines not matching the format: skip or whole-line")
      ->check(CLI::IsMember({"skip", "whole-line"}))
      ->capture_default_str();
}

std::optional<std::size_t> parse_band(const std::string& text) {
  if (text == "none") return std::nullopt;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size() && v >= 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw UsageError("--dtw-band expects a non-negative integer or 'none', got '" + text + "'");
}

RunConfig build_config(const RunFlags& f) {
  RunConfig cfg;
  cfg.log_path = f.log;
  cfg.dataset = f.dataset.empty() ? fs::path(f.log).stem().string() : f.dataset;

  if (f.config) {
    const ConfigFile file = ConfigFile::load(*f.config);
    const DatasetSettings* s = file.find(cfg.dataset);
    if (!s) {
      throw UsageError("config " + *f.config + " has no section for dataset '" +
                       cfg.dataset + "'");
    }
    if (!s->log_format.empty()) cfg.log_format = s->log_format;
    cfg.preprocess_patterns = s->regex;
    if (s->jaccard_threshold) cfg.jaccard_threshold = *s->jaccard_threshold;
    if (s->grouping) cfg.strategy = GroupingStrategy::parse(*s->grouping);
  }

  if (f.preset) {
    const auto t = preset_threshold(*f.preset, cfg.dataset);
    if (!t) {
      throw UsageError("preset '" + *f.preset + "' has no threshold for dataset '" +
                       cfg.dataset + "'");
    }
    cfg.jaccard_threshold = *t;
  }
  if (f.threshold) cfg.jaccard_threshold = *f.threshold;
  if (f.log_format) cfg.log_format = *f.log_format;
  if (!f.regex.empty()) cfg.preprocess_patterns = f.regex;
  if (f.strategy) cfg.strategy = GroupingStrategy::parse(*f.strategy);

  cfg.signature_length = f.signature_length;
  cfg.seed = f.seed;
  cfg.sample_size = f.sample_size;
  cfg.dtw_band = parse_band(f.dtw_band);
  cfg.output_dir = f.output_dir;
  if (f.ground_truth) cfg.ground_truth = fs::path(*f.ground_truth);
  cfg.threads = f.threads;
  cfg.on_mismatch = f.on_mismatch == "whole-line" ? MismatchPolicy::WholeLine
                                                  : MismatchPolicy::Skip;
  cfg.validate();
  // Surface bad formats and patterns as usage errors before any work starts.
  LogFormat::parse(cfg.log_format);
  compile_rules(cfg.preprocess_patterns);
  return cfg;
}

void write_report_csv(const EvaluationReport& report, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  csv::write_row(out, EvaluationReport::csv_header());
  csv::write_row(out, report.csv_row());
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

int run_parse(const RunFlags& flags) {
  const RunConfig cfg = build_config(flags);
  const RunResult r = run_pipeline(cfg);
  std::printf("Parsed %zu lines (%zu skipped): %zu initial groups, %zu clusters, %zu templates\n",
              r.output.rows.size(), r.rejects.skipped_lines.size(), r.initial_groups, r.clusters,
              r.output.templates.size());
  std::printf("Structured output  %s\nTemplates          %s\n", r.structured_path.c_str(),
              r.templates_path.c_str());
  if (r.report) {
    const fs::path report_path = cfg.output_dir / (cfg.dataset + "_report.csv");
    write_report_csv(*r.report, report_path);
    std::printf("\n%s", r.report->to_table().c_str());
    std::printf("Report             %s\n", report_path.c_str());
  } else {
    std::printf("Parsing time       %.3f s\n", r.parsing_time_s);
  }
  return kOk;
}

struct EvalFlags {
  std::string predicted;
  std::string ground_truth;
  std::string dataset = "dataset";
  std::optional<std::string> output_dir;
};

int run_eval(const EvalFlags& f) {
  const TemplateColumn predicted_column = read_template_column(f.predicted);
  TemplateMap predicted(predicted_column.entries.begin(), predicted_column.entries.end());
  std::size_t unparsed = 0;
  const TemplateMap truth =
      align_ground_truth(read_template_column(f.ground_truth), predicted, &unparsed);
  EvaluationReport report = evaluate(predicted, truth);
  report.dataset = f.dataset;
  report.config["unparsed_truth_lines"] = std::to_string(unparsed);
  std::printf("%s", report.to_table().c_str());
  if (f.output_dir) {
    const fs::path path = fs::path(*f.output_dir) / (f.dataset + "_report.csv");
    write_report_csv(report, path);
    std::printf("Report             %s\n", path.c_str());
  }
  return kOk;
}

int print_sweep(const std::vector<SweepRow>& rows, const fs::path& csv_path) {
  write_sweep_csv(rows, csv_path);
  std::printf("%-32s %9s %8s %8s %10s %8s\n", "run", "threshold", "GA", "PA", "time_s",
              "clusters");
  int failed = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::printf("%-32s %9.2f  failed: %s\n", row.label.c_str(), row.threshold,
                  row.error.c_str());
      ++failed;
      continue;
    }
    auto metric = [](const std::optional<double>& v) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.4f", v.value_or(0.0));
      return v ? std::string(buf) : std::string("-");
    };
    std::printf("%-32s %9.2f %8s %8s %10.3f %8zu\n", row.label.c_str(), row.threshold,
                metric(row.ga).c_str(), metric(row.pa).c_str(), row.parsing_time_s,
                row.clusters);
  }
  std::printf("Sweep table        %s\n", csv_path.c_str());
  if (failed) {
    std::fprintf(stderr, "loglshd: %d of %zu runs failed\n", failed, rows.size());
    return kRuntime;
  }
  return kOk;
}

int run_sweep_threshold(const RunFlags& flags, const std::vector<double>& thresholds) {
  const RunConfig cfg = build_config(flags);
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw UsageError("sweep thresholds must lie in (0, 1]");
    }
  }
  const std::vector<double> list = thresholds.empty() ? default_threshold_sweep() : thresholds;
  const auto rows = sweep_thresholds(cfg, list);
  return print_sweep(rows, cfg.output_dir / (cfg.dataset + "_threshold_sweep.csv"));
}

int run_sweep_strategy(const RunFlags& flags, const std::vector<std::string>& names) {
  const RunConfig cfg = build_config(flags);
  std::vector<GroupingStrategy> list;
  for (const auto& n : names) list.push_back(GroupingStrategy::parse(n));
  if (list.empty()) list = default_strategy_sweep();
  const auto rows = sweep_strategies(cfg, list);
  return print_sweep(rows, cfg.output_dir / (cfg.dataset + "_strategy_sweep.csv"));
}

struct SynthFlags {
  SyntheticSpec spec;
  std::string alphabet = "numeric";
  std::string name = "synthetic";
  std::string output_dir = "loglshd_out";
};

int run_synth(SynthFlags f) {
  f.spec.alphabet = parse_alphabet(f.alphabet);
  f.spec.validate();
  const SyntheticCorpus corpus = generate_synthetic(f.spec);
  const SyntheticFiles files = write_synthetic(corpus, f.output_dir, f.name);
  std::printf("Wrote %zu lines from %zu templates\n", corpus.lines.size(),
              corpus.templates.size());
  std::printf("Log                %s\nGround truth       %s\nLog format         %s\n",
              files.log.c_str(), files.ground_truth.c_str(), corpus.log_format.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log parser: length/character grouping, MinHash LSH merging and DTW templates"};
  app.require_subcommand(1);

  RunFlags parse_flags;
  auto* parse = app.add_subcommand("parse", "Parse a log file into templates");
  add_run_options(parse, parse_flags);

  EvalFlags eval_flags;
  auto* eval = app.add_subcommand("eval", "Score a structured CSV against ground truth");
  eval->add_option("--predicted", eval_flags.predicted,
                   "Structured CSV produced by parse (LineId, EventTemplate)")
      ->required();
  eval->add_option("--ground-truth", eval_flags.ground_truth, "Ground-truth structured CSV")
      ->required();
  eval->add_option("--dataset", eval_flags.dataset, "Dataset name for the report")
      ->capture_default_str();
  eval->add_option("--output-dir", eval_flags.output_dir, "Where to write the report CSV");

  RunFlags threshold_flags;
  std::vector<double> thresholds;
  auto* sweep_t = app.add_subcommand("sweep-threshold", "One run per Jaccard threshold");
  add_run_options(sweep_t, threshold_flags);
  sweep_t->add_option("--thresholds", thresholds,
                      "Thresholds to try (default 1, 0.95, ..., 0.5)")
      ->delimiter(',');

  RunFlags strategy_flags;
  std::vector<std::string> strategies;
  auto* sweep_s = app.add_subcommand("sweep-strategy", "One run per grouping strategy");
  add_run_options(sweep_s, strategy_flags);
  sweep_s->add_option("--strategies", strategies,
                      "Strategies to try (default: base, then first, p25, p50, p75, last "
                      "added cumulatively)")
      ->delimiter(',');

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with known templates");
  synth->add_option("--templates", synth_flags.spec.n_templates)->capture_default_str();
  synth->add_option("--logs-per-template", synth_flags.spec.logs_per_template)
      ->capture_default_str();
  synth->add_option("--slots", synth_flags.spec.slots_per_template,
                    "Variable slots per template")
      ->capture_default_str();
  synth->add_option("--min-words", synth_flags.spec.min_words)->capture_default_str();
  synth->add_option("--max-words", synth_flags.spec.max_words)->capture_default_str();
  synth->add_option("--alphabet", synth_flags.alphabet, "numeric, alphabetic or mixed")
      ->check(CLI::IsMember({"numeric", "non-alphabetic", "alphabetic", "mixed"}))
      ->capture_default_str();
  synth->add_option("--pool", synth_flags.spec.alphabetic_pool,
                    "Distinct values per alphabetic slot")
      ->capture_default_str();
  synth->add_option("--seed", synth_flags.spec.seed)->capture_default_str();
  synth->add_option("--name", synth_flags.name, "File name stem")->capture_default_str();
  synth->add_option("--output-dir", synth_flags.output_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return run_parse(parse_flags);
    if (*eval) return run_eval(eval_flags);
    if (*sweep_t) return run_sweep_threshold(threshold_flags, thresholds);
    if (*sweep_s) return run_sweep_strategy(strategy_flags, strategies);
    if (*synth) return run_synth(synth_flags);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "loglshd: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "loglshd: %s\n", e.what());
    return kUsage;
  } catch (const PipelineError& e) {
    std::fprintf(stderr, "loglshd: stage %s failed: %s\n", e.stage().c_str(), e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "loglshd: %s\n", e.what());
    return kRuntime;
  }
  return kUsage;
}
