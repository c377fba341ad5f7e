#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loglshd {

/// Per-dataset section of a config file.
struct DatasetSettings {
  std::string log_format;
  std::vector<std::string> regex;
  std::optional<double> jaccard_threshold;
  std::optional<std::string> grouping;
};

/// JSON config holding one section per dataset:
///
///   {
///     "datasets": {
///       "Apache": {
///         "log_format": "\\[<Time>\\] \\[<Level>\\] <Content>",
///         "regex": ["(\\d+\\.){3}\\d+"],
///         "jaccard_threshold": 0.65,
///         "grouping": "base+first+p25+p50"
///       }
///     }
///   }
class ConfigFile {
 public:
  /// Throws std::runtime_error on unreadable files or malformed documents.
  static ConfigFile load(const std::filesystem::path& path);
  static ConfigFile parse(std::string_view json_text);

  const DatasetSettings* find(std::string_view dataset) const;
  const std::map<std::string, DatasetSettings, std::less<>>& datasets() const {
    return datasets_;
  }

 private:
  std::map<std::string, DatasetSettings, std::less<>> datasets_;
};

/// Per-dataset default thresholds published for Loghub-2.0, chosen there by
/// the best GA + PA.
const std::map<std::string, double, std::less<>>& loghub2_thresholds();

/// Threshold for `dataset` under a named preset ("loghub2"). Throws
/// std::invalid_argument for an unknown preset; nullopt for an unknown
/// dataset.
std::optional<double> preset_threshold(std::string_view preset,
                                       std::string_view dataset);

}  // namespace loglshd
