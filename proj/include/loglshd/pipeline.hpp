#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglshd/corpus_io.hpp"
#include "loglshd/initial_grouping.hpp"
#include "loglshd/metrics.hpp"

namespace loglshd {

struct RunConfig {
  std::string dataset = "dataset";
  std::filesystem::path log_path;
  std::string log_format = "<Content>";
  std::vector<std::string> preprocess_patterns;
  GroupingStrategy strategy = GroupingStrategy::defaults();
  double jaccard_threshold = 0.9;
  std::size_t signature_length = 50;
  std::uint64_t seed = 0;
  std::size_t sample_size = 10;
  std::optional<std::size_t> dtw_band;
  std::filesystem::path output_dir = "loglshd_out";
  std::optional<std::filesystem::path> ground_truth;
  std::size_t threads = 1;
  MismatchPolicy on_mismatch = MismatchPolicy::Skip;

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
  /// Parameter echo for reports.
  std::map<std::string, std::string> describe() const;
};

/// Raised by run_pipeline; names the failing stage.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RunResult {
  StructuredOutput output;
  RejectsReport rejects;
  std::optional<EvaluationReport> report;
  double parsing_time_s = 0.0;  // file read through output write
  std::size_t initial_groups = 0;
  std::size_t clusters = 0;
  std::filesystem::path structured_path;
  std::filesystem::path templates_path;
};

/// read -> preprocess -> group -> merge -> extract -> write, then evaluate
/// when ground truth is configured.
RunResult run_pipeline(const RunConfig& config);

/// Ground truth restricted to the parsed lines. Throws std::runtime_error if
/// a parsed line has no truth entry.
TemplateMap align_ground_truth(const TemplateColumn& truth,
                               const TemplateMap& predicted,
                               std::size_t* unparsed_truth_lines = nullptr);

TemplateMap predicted_templates(const StructuredOutput& output);

struct SweepRow {
  std::string label;
  double threshold = 0.0;
  std::string strategy;
  std::optional<double> ga;
  std::optional<double> pa;
  double parsing_time_s = 0.0;
  std::size_t initial_groups = 0;
  std::size_t clusters = 0;
  std::size_t templates = 0;
  std::string error;  // empty on success
};

/// 1, 0.95, ..., 0.5.
std::vector<double> default_threshold_sweep();
/// base, then first, p25, p50, p75 and last added one at a time.
std::vector<GroupingStrategy> default_strategy_sweep();

/// One run per threshold with the same seed. Each run writes under
/// output_dir/threshold_<T>. A failing run is recorded in its row.
std::vector<SweepRow> sweep_thresholds(const RunConfig& base,
                                       std::span<const double> thresholds);
std::vector<SweepRow> sweep_strategies(
    const RunConfig& base, std::span<const GroupingStrategy> strategies);

void write_sweep_csv(std::span<const SweepRow> rows,
                     const std::filesystem::path& path);

}  // namespace loglshd
