#include <string>

#include "doctest.h"
#include "loglshd/config.hpp"
#include "temp_dir.hpp"

using namespace loglshd;

TEST_CASE("config sections") {
  const auto cfg = ConfigFile::parse(R"({
    "datasets": {
      "Apache": {
        "log_format": "\\[<Time>\\] \\[<Level>\\] <Content>",
        "regex": ["(\\d+\\.){3}\\d+"],
        "jaccard_threshold": 0.65,
        "grouping": "base+first"
      },
      "Bare": {}
    }
  })");
  const DatasetSettings* apache = cfg.find("Apache");
  REQUIRE(apache != nullptr);
  CHECK(apache->log_format == "\\[<Time>\\] \\[<Level>\\] <Content>");
  CHECK(apache->regex == std::vector<std::string>{"(\\d+\\.){3}\\d+"});
  CHECK(apache->jaccard_threshold == std::optional<double>(0.65));
  CHECK(apache->grouping == std::optional<std::string>("base+first"));

  const DatasetSettings* bare = cfg.find("Bare");
  REQUIRE(bare != nullptr);
  CHECK(bare->log_format == "<Content>");
  CHECK(bare->regex.empty());
  CHECK_FALSE(bare->jaccard_threshold);
  CHECK(cfg.find("Missing") == nullptr);
}

TEST_CASE("malformed configs are reported") {
  CHECK_THROWS_AS(ConfigFile::parse("{"), std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse("{}"), std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse(R"({"datasets": {"A": 3}})"), std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::parse(R"({"datasets": {"A": {"regex": "x"}}})"),
                  std::runtime_error);
  CHECK_THROWS_AS(ConfigFile::load("/nonexistent/config.json"), std::runtime_error);
}

TEST_CASE("config loads from disk") {
  loglshd::testing::TempDir dir;
  loglshd::testing::write_file(dir / "c.json", R"({"datasets": {"X": {"jaccard_threshold": 1}}})");
  const auto cfg = ConfigFile::load(dir / "c.json");
  REQUIRE(cfg.find("X"));
  CHECK(cfg.find("X")->jaccard_threshold == std::optional<double>(1.0));
}

TEST_CASE("published threshold preset") {
  CHECK(loghub2_thresholds().size() == 14);
  CHECK(preset_threshold("loghub2", "Apache") == std::optional<double>(0.65));
  CHECK(preset_threshold("loghub2", "Proxifier") == std::optional<double>(1.0));
  CHECK(preset_threshold("loghub2", "Mac") == std::optional<double>(0.95));
  CHECK(preset_threshold("loghub2", "Thunderbird") == std::optional<double>(0.60));
  CHECK(preset_threshold("loghub2", "HDFS") == std::optional<double>(0.80));
  CHECK_FALSE(preset_threshold("loghub2", "Unknown"));
  CHECK_THROWS_AS(preset_threshold("other", "Apache"), std::invalid_argument);
}
