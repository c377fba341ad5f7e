#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace loglshd {

/// Groups of line ids. Every line id appears in exactly one group.
using Partition = std::vector<std::vector<std::size_t>>;

/// line id -> template text.
using TemplateMap = std::map<std::size_t, std::string>;

/// Trims the ends and collapses internal whitespace runs to one space.
std::string normalize_template(std::string_view text);

/// Partition induced by equal (normalized) template strings.
Partition partition_by_template(const TemplateMap& templates);

/// Fraction of lines whose predicted group has exactly the same members as
/// their true group. Throws std::invalid_argument if the partitions cover
/// different line ids.
double grouping_accuracy(const Partition& predicted, const Partition& truth);

/// Fraction of lines whose normalized predicted template equals the truth.
double parsing_accuracy(const TemplateMap& predicted, const TemplateMap& truth);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Harmonic mean with 0/0 defined as 0.
double harmonic_mean(double a, double b) noexcept;

/// PGA/RGA/FGA: a predicted group counts as correct when its member set
/// equals some true group.
F1Score group_f1(const Partition& predicted, const Partition& truth);

/// PTA/RTA/FTA. Identified templates are the distinct normalized predicted
/// strings; one is correct when its lines form exactly a true group and the
/// strings match.
F1Score template_f1(const TemplateMap& predicted, const TemplateMap& truth);

/// Templates per thousand annotated logs. Throws std::invalid_argument when
/// n_logs is zero.
double template_density(std::size_t n_templates, std::size_t n_logs);

struct EvaluationReport {
  std::string dataset;
  double ga = 0.0;
  double pa = 0.0;
  F1Score fga;
  F1Score fta;
  double parsing_time_s = 0.0;
  double template_density = 0.0;  // of the ground truth
  std::size_t n_logs = 0;
  std::size_t n_predicted_templates = 0;
  std::size_t n_truth_templates = 0;
  std::map<std::string, std::string> config;  // parameter echo

  static std::vector<std::string> csv_header();
  std::vector<std::string> csv_row() const;
  std::string to_table() const;
};

/// Computes every metric. Both maps must cover the same line ids.
EvaluationReport evaluate(const TemplateMap& predicted, const TemplateMap& truth);

/// Wall-clock timer on the monotonic clock.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace loglshd
