#include "loglshd/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "loglshd/csv.hpp"
#include "loglshd/hashing.hpp"
#include "loglshd/lsh_cluster.hpp"
#include "loglshd/template_extract.hpp"

namespace loglshd {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw std::invalid_argument("jaccard threshold must lie in (0, 1]");
  }
  if (signature_length == 0) {
    throw std::invalid_argument("signature length must be >= 1");
  }
  if (sample_size == 0) throw std::invalid_argument("sample size must be >= 1");
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
  if (dataset.empty()) throw std::invalid_argument("dataset name is empty");
}

std::map<std::string, std::string> RunConfig::describe() const {
  std::map<std::string, std::string> d{
      {"log_format", log_format},
      {"strategy", strategy.to_string()},
      {"jaccard_threshold", fixed(jaccard_threshold, 4)},
      {"signature_length", std::to_string(signature_length)},
      {"seed", std::to_string(seed)},
      {"sample_size", std::to_string(sample_size)},
      {"dtw_band", dtw_band ? std::to_string(*dtw_band) : "none"},
      {"regex_count", std::to_string(preprocess_patterns.size())},
  };
  return d;
}

TemplateMap predicted_templates(const StructuredOutput& output) {
  TemplateMap map;
  for (const auto& row : output.rows) {
    map.emplace_hint(map.end(), row.line_id, row.event_template);
  }
  return map;
}

TemplateMap align_ground_truth(const TemplateColumn& truth,
                               const TemplateMap& predicted,
                               std::size_t* unparsed_truth_lines) {
  TemplateMap aligned;
  std::size_t unparsed = 0;
  auto p = predicted.begin();
  for (const auto& [id, text] : truth.entries) {
    if (p != predicted.end() && p->first < id) {
      throw std::runtime_error("line " + std::to_string(p->first) +
                               " has no ground-truth template");
    }
    if (p != predicted.end() && p->first == id) {
      aligned.emplace_hint(aligned.end(), id, text);
      ++p;
    } else {
      ++unparsed;
    }
  }
  if (p != predicted.end()) {
    throw std::runtime_error("line " + std::to_string(p->first) +
                             " has no ground-truth template");
  }
  if (unparsed_truth_lines) *unparsed_truth_lines = unparsed;
  return aligned;
}

RunResult run_pipeline(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  const LogFormat format =
      stage("config", [&] { return LogFormat::parse(config.log_format); });
  const auto rules = stage("config", [&] {
    return compile_rules(config.preprocess_patterns);
  });

  RunResult result;
  const Stopwatch clock;

  ParsedLog parsed = stage("read", [&] {
    return parse_log_file(config.log_path, format, config.on_mismatch);
  });
  result.rejects = std::move(parsed.rejects);

  const RecordStore store = stage("preprocess", [&] {
    return RecordStore(std::move(parsed.records), rules, config.threads);
  });

  const auto groups = stage("group", [&] {
    return build_initial_groups(store, config.strategy, config.threads);
  });
  result.initial_groups = groups.size();

  const auto clusters = stage("merge", [&] {
    MergeOptions options;
    options.threshold = config.jaccard_threshold;
    options.signature_length = config.signature_length;
    options.seed = derive_seed(config.seed, "minhash");
    options.threads = config.threads;
    return merge_clusters(groups, store, options);
  });
  result.clusters = clusters.size();

  result.output = stage("extract", [&] {
    ExtractOptions options;
    options.sample_size = config.sample_size;
    options.seed = derive_seed(config.seed, "sampling");
    options.dtw_band = config.dtw_band;
    options.threads = config.threads;
    return assign_templates(clusters, store, options);
  });

  stage("write", [&] {
    auto [structured, templates] =
        write_structured(result.output, config.output_dir, config.dataset);
    result.structured_path = std::move(structured);
    result.templates_path = std::move(templates);
    write_rejects(result.rejects, config.output_dir / "rejects.txt");
  });
  result.parsing_time_s = clock.seconds();

  if (config.ground_truth) {
    result.report = stage("evaluate", [&] {
      const TemplateColumn truth = read_template_column(*config.ground_truth);
      const TemplateMap predicted = predicted_templates(result.output);
      std::size_t unparsed = 0;
      const TemplateMap aligned = align_ground_truth(truth, predicted, &unparsed);
      EvaluationReport report = evaluate(predicted, aligned);
      report.dataset = config.dataset;
      report.parsing_time_s = result.parsing_time_s;
      report.config = config.describe();
      report.config["unparsed_truth_lines"] = std::to_string(unparsed);
      return report;
    });
  }
  return result;
}

std::vector<double> default_threshold_sweep() {
  return {1.0, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55, 0.5};
}

std::vector<GroupingStrategy> default_strategy_sweep() {
  std::vector<GroupingStrategy> out;
  GroupingStrategy s{true, true, {}};
  out.push_back(s);
  for (auto p : {CharPosition::First, CharPosition::P25, CharPosition::P50,
                 CharPosition::P75, CharPosition::Last}) {
    s.positions.push_back(p);
    out.push_back(s);
  }
  return out;
}

namespace {

SweepRow run_row(RunConfig config, std::string label) {
  SweepRow row;
  row.label = std::move(label);
  row.threshold = config.jaccard_threshold;
  row.strategy = config.strategy.to_string();
  try {
    const RunResult r = run_pipeline(config);
    row.parsing_time_s = r.parsing_time_s;
    row.initial_groups = r.initial_groups;
    row.clusters = r.clusters;
    row.templates = r.output.templates.size();
    if (r.report) {
      row.ga = r.report->ga;
      row.pa = r.report->pa;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_thresholds(const RunConfig& base,
                                       std::span<const double> thresholds) {
  std::vector<SweepRow> rows;
  for (double t : thresholds) {
    RunConfig config = base;
    config.jaccard_threshold = t;
    const std::string label = "threshold_" + fixed(t, 2);
    config.output_dir = base.output_dir / label;
    rows.push_back(run_row(std::move(config), label));
  }
  return rows;
}

std::vector<SweepRow> sweep_strategies(
    const RunConfig& base, std::span<const GroupingStrategy> strategies) {
  std::vector<SweepRow> rows;
  for (const auto& s : strategies) {
    RunConfig config = base;
    config.strategy = s;
    const std::string label = "strategy_" + s.to_string();
    config.output_dir = base.output_dir / label;
    rows.push_back(run_row(std::move(config), label));
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows,
                     const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  csv::write_row(out, {"Label", "Threshold", "Strategy", "GA", "PA",
                       "ParsingTimeSeconds", "InitialGroups", "Clusters",
                       "Templates", "Error"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.label, fixed(r.threshold, 2), r.strategy,
                         r.ga ? fixed(*r.ga, 6) : "", r.pa ? fixed(*r.pa, 6) : "",
                         fixed(r.parsing_time_s, 3), std::to_string(r.initial_groups),
                         std::to_string(r.clusters), std::to_string(r.templates),
                         r.error});
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace loglshd
