#include "loglshd/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "loglshd/text.hpp"

namespace loglshd {
namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Group index per line id; validates that both partitions cover the same ids.
struct Coverage {
  std::unordered_map<std::size_t, std::size_t> group_of;
};

Coverage index_partition(const Partition& partition) {
  Coverage cov;
  for (std::size_t g = 0; g < partition.size(); ++g) {
    for (std::size_t id : partition[g]) {
      if (!cov.group_of.emplace(id, g).second) {
        throw std::invalid_argument("line id " + std::to_string(id) +
                                    " appears in two groups");
      }
    }
  }
  return cov;
}

void require_same_coverage(const Coverage& a, const Coverage& b) {
  if (a.group_of.size() != b.group_of.size()) {
    throw std::invalid_argument("predicted and truth cover different logs");
  }
  for (const auto& [id, g] : a.group_of) {
    if (!b.group_of.contains(id)) {
      throw std::invalid_argument("line id " + std::to_string(id) +
                                  " missing from ground truth");
    }
  }
}

// Truth group whose members equal predicted[g], or kNone.
std::size_t matching_truth_group(const std::vector<std::size_t>& group,
                                 const Coverage& truth_cov,
                                 const Partition& truth) {
  if (group.empty()) return kNone;
  const std::size_t t = truth_cov.group_of.at(group.front());
  if (truth[t].size() != group.size()) return kNone;
  for (std::size_t id : group) {
    if (truth_cov.group_of.at(id) != t) return kNone;
  }
  return t;
}

void require_same_keys(const TemplateMap& predicted, const TemplateMap& truth) {
  if (predicted.size() != truth.size() ||
      !std::equal(predicted.begin(), predicted.end(), truth.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw std::invalid_argument("predicted and truth cover different logs");
  }
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string normalize_template(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (text::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

Partition partition_by_template(const TemplateMap& templates) {
  Partition partition;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& [id, t] : templates) {
    auto [it, inserted] = index.try_emplace(normalize_template(t), partition.size());
    if (inserted) partition.emplace_back();
    partition[it->second].push_back(id);
  }
  return partition;
}

double grouping_accuracy(const Partition& predicted, const Partition& truth) {
  const Coverage pred_cov = index_partition(predicted);
  const Coverage truth_cov = index_partition(truth);
  require_same_coverage(pred_cov, truth_cov);
  if (pred_cov.group_of.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& group : predicted) {
    if (matching_truth_group(group, truth_cov, truth) != kNone) {
      correct += group.size();
    }
  }
  return static_cast<double>(correct) /
         static_cast<double>(pred_cov.group_of.size());
}

double parsing_accuracy(const TemplateMap& predicted, const TemplateMap& truth) {
  require_same_keys(predicted, truth);
  if (predicted.empty()) return 0.0;
  std::size_t correct = 0;
  auto t = truth.begin();
  for (const auto& [id, p] : predicted) {
    correct += normalize_template(p) == normalize_template(t->second);
    ++t;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double harmonic_mean(double a, double b) noexcept {
  return a + b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
}

F1Score group_f1(const Partition& predicted, const Partition& truth) {
  const Coverage pred_cov = index_partition(predicted);
  const Coverage truth_cov = index_partition(truth);
  require_same_coverage(pred_cov, truth_cov);
  std::size_t correct = 0;
  std::size_t n_pred = 0;
  for (const auto& group : predicted) {
    if (group.empty()) continue;
    ++n_pred;
    correct += matching_truth_group(group, truth_cov, truth) != kNone;
  }
  std::size_t n_truth = 0;
  for (const auto& group : truth) n_truth += !group.empty();
  F1Score s;
  s.precision = n_pred ? static_cast<double>(correct) / n_pred : 0.0;
  s.recall = n_truth ? static_cast<double>(correct) / n_truth : 0.0;
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

F1Score template_f1(const TemplateMap& predicted, const TemplateMap& truth) {
  require_same_keys(predicted, truth);
  const Partition pred_groups = partition_by_template(predicted);
  const Partition truth_groups = partition_by_template(truth);
  const Coverage truth_cov = index_partition(truth_groups);
  std::size_t correct = 0;
  for (const auto& group : pred_groups) {
    const std::size_t t = matching_truth_group(group, truth_cov, truth_groups);
    if (t == kNone) continue;
    const std::size_t id = group.front();
    correct += normalize_template(predicted.at(id)) ==
               normalize_template(truth.at(id));
  }
  F1Score s;
  s.precision = pred_groups.empty()
                    ? 0.0
                    : static_cast<double>(correct) / pred_groups.size();
  s.recall = truth_groups.empty()
                 ? 0.0
                 : static_cast<double>(correct) / truth_groups.size();
  s.f1 = harmonic_mean(s.precision, s.recall);
  return s;
}

double template_density(std::size_t n_templates, std::size_t n_logs) {
  if (n_logs == 0) {
    throw std::invalid_argument("template density needs at least one log");
  }
  return static_cast<double>(n_templates) / static_cast<double>(n_logs) * 1000.0;
}

EvaluationReport evaluate(const TemplateMap& predicted, const TemplateMap& truth) {
  require_same_keys(predicted, truth);
  const Partition pred_groups = partition_by_template(predicted);
  const Partition truth_groups = partition_by_template(truth);

  EvaluationReport report;
  report.n_logs = truth.size();
  report.ga = grouping_accuracy(pred_groups, truth_groups);
  report.pa = parsing_accuracy(predicted, truth);
  report.fga = group_f1(pred_groups, truth_groups);
  report.fta = template_f1(predicted, truth);
  report.n_predicted_templates = pred_groups.size();
  report.n_truth_templates = truth_groups.size();
  report.template_density =
      truth.empty() ? 0.0 : template_density(truth_groups.size(), truth.size());
  return report;
}

std::vector<std::string> EvaluationReport::csv_header() {
  return {"Dataset", "Logs",  "GA",  "PA",  "PGA",  "RGA",
          "FGA",     "PTA",   "RTA", "FTA", "PredictedTemplates",
          "TruthTemplates", "TemplateDensity", "ParsingTimeSeconds", "Config"};
}

std::vector<std::string> EvaluationReport::csv_row() const {
  std::string cfg;
  for (const auto& [k, v] : config) {
    if (!cfg.empty()) cfg += ';';
    cfg += k + '=' + v;
  }
  return {dataset,
          std::to_string(n_logs),
          format_fixed(ga, 6),
          format_fixed(pa, 6),
          format_fixed(fga.precision, 6),
          format_fixed(fga.recall, 6),
          format_fixed(fga.f1, 6),
          format_fixed(fta.precision, 6),
          format_fixed(fta.recall, 6),
          format_fixed(fta.f1, 6),
          std::to_string(n_predicted_templates),
          std::to_string(n_truth_templates),
          format_fixed(template_density, 3),
          format_fixed(parsing_time_s, 3),
          cfg};
}

std::string EvaluationReport::to_table() const {
  std::ostringstream out;
  out << "Dataset            " << dataset << '\n'
      << "Logs               " << n_logs << '\n'
      << "GA                 " << format_fixed(ga, 4) << '\n'
      << "PA                 " << format_fixed(pa, 4) << '\n'
      << "FGA (PGA / RGA)    " << format_fixed(fga.f1, 4) << " ("
      << format_fixed(fga.precision, 4) << " / " << format_fixed(fga.recall, 4)
      << ")\n"
      << "FTA (PTA / RTA)    " << format_fixed(fta.f1, 4) << " ("
      << format_fixed(fta.precision, 4) << " / " << format_fixed(fta.recall, 4)
      << ")\n"
      << "Templates          " << n_predicted_templates << " predicted, "
      << n_truth_templates << " truth\n"
      << "Template density   " << format_fixed(template_density, 3) << '\n'
      << "Parsing time       " << format_fixed(parsing_time_s, 3) << " s\n";
  return out.str();
}

}  // namespace loglshd
