#include "loglshd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace loglshd {

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse(buffer.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

ConfigFile ConfigFile::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("datasets") ||
      !doc["datasets"].is_object()) {
    throw std::runtime_error("config needs a top-level \"datasets\" object");
  }
  ConfigFile config;
  for (const auto& [name, section] : doc["datasets"].items()) {
    if (!section.is_object()) {
      throw std::runtime_error("dataset '" + name + "' must be an object");
    }
    DatasetSettings s;
    try {
      s.log_format = section.value("log_format", std::string("<Content>"));
      if (section.contains("regex")) {
        s.regex = section["regex"].get<std::vector<std::string>>();
      }
      if (section.contains("jaccard_threshold")) {
        s.jaccard_threshold = section["jaccard_threshold"].get<double>();
      }
      if (section.contains("grouping")) {
        s.grouping = section["grouping"].get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("dataset '" + name + "': " + e.what());
    }
    config.datasets_.emplace(name, std::move(s));
  }
  return config;
}

const DatasetSettings* ConfigFile::find(std::string_view dataset) const {
  const auto it = datasets_.find(dataset);
  return it == datasets_.end() ? nullptr : &it->second;
}

const std::map<std::string, double, std::less<>>& loghub2_thresholds() {
  static const std::map<std::string, double, std::less<>> table{
      {"Proxifier", 1.00}, {"Linux", 0.65},     {"Apache", 0.65},
      {"Zookeeper", 0.80}, {"Hadoop", 0.85},    {"HealthApp", 0.65},
      {"OpenStack", 0.70}, {"HPC", 0.70},       {"Mac", 0.95},
      {"OpenSSH", 0.85},   {"Spark", 0.90},     {"Thunderbird", 0.60},
      {"BGL", 0.90},       {"HDFS", 0.80},
  };
  return table;
}

std::optional<double> preset_threshold(std::string_view preset,
                                       std::string_view dataset) {
  if (preset != "loghub2") {
    throw std::invalid_argument("unknown threshold preset '" +
                                std::string(preset) + "'");
  }
  const auto& table = loghub2_thresholds();
  const auto it = table.find(dataset);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

}  // namespace loglshd
