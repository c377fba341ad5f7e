#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "loglshd/metrics.hpp"
#include "metrics_oracle.hpp"

using namespace loglshd;
using loglshd::testing::oracle_scores;

namespace {

TemplateMap from(std::initializer_list<std::pair<std::size_t, const char*>> rows) {
  TemplateMap m;
  for (const auto& [id, t] : rows) m.emplace(id, t);
  return m;
}

void random_instance(std::mt19937_64& rng, TemplateMap& pred, TemplateMap& truth) {
  pred.clear();
  truth.clear();
  const std::size_t n = 1 + rng() % 50;
  const std::size_t k = 1 + rng() % 8;
  const std::vector<std::string> pool = {"a <*>", "a  <*>", "b c", "<*>", "d", "e f <*>",
                                         "g", "h i", "a <*> x"};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t id = 1 + i * 3;
    truth.emplace(id, pool[rng() % k]);
    pred.emplace(id, rng() % 3 ? truth[id] : pool[rng() % pool.size()]);
  }
}

}  // namespace

TEST_CASE("grouping accuracy examples") {
  const Partition truth = {{1, 2}, {3, 4}};
  CHECK(grouping_accuracy(truth, truth) == 1.0);
  CHECK(grouping_accuracy({{1, 2, 3, 4}}, truth) == 0.0);
  CHECK(grouping_accuracy({{1, 2}, {3}, {4}}, truth) == 0.5);
  CHECK_THROWS_AS(grouping_accuracy({{1, 2}}, truth), std::invalid_argument);
  CHECK(grouping_accuracy({}, {}) == 0.0);
}

TEST_CASE("parsing accuracy examples") {
  const auto truth = from({{1, "Found block <*> locally"}, {2, "x"}});
  CHECK(parsing_accuracy(truth, truth) == 1.0);
  CHECK(parsing_accuracy(from({{1, "Found  block <*> locally "}, {2, "y"}}), truth) == 0.5);
  CHECK_THROWS_AS(parsing_accuracy(from({{1, "a"}}), truth), std::invalid_argument);
  CHECK_THROWS_AS(parsing_accuracy(from({{1, "a"}, {3, "b"}}), truth), std::invalid_argument);

  TemplateMap ten, corrupt;
  for (std::size_t i = 1; i <= 10; ++i) {
    ten.emplace(i, "t" + std::to_string(i % 2));
    corrupt.emplace(i, i <= 3 ? "wrong" : ten[i]);
  }
  CHECK(parsing_accuracy(corrupt, ten) == doctest::Approx(0.7));
}

TEST_CASE("group f1 examples") {
  const Partition truth = {{1, 2}, {3, 4}};
  const F1Score same = group_f1(truth, truth);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);
  const F1Score split = group_f1({{1, 2}, {3}, {4}}, truth);
  CHECK(split.precision == doctest::Approx(1.0 / 3));
  CHECK(split.recall == doctest::Approx(0.5));
  CHECK(split.f1 == doctest::Approx(0.4));
  const F1Score none = group_f1({{1, 3}, {2, 4}}, truth);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
}

TEST_CASE("template f1 examples") {
  const auto truth = from({{1, "A <*>"}, {2, "A <*>"}, {3, "B"}});
  const F1Score perfect = template_f1(truth, truth);
  CHECK(perfect.f1 == 1.0);
  const F1Score one_wrong = template_f1(from({{1, "A <*>"}, {2, "A <*>"}, {3, "C"}}), truth);
  CHECK(one_wrong.precision == 0.5);
  CHECK(one_wrong.recall == 0.5);
  CHECK(one_wrong.f1 == 0.5);
  const F1Score wrong_groups = template_f1(from({{1, "X"}, {2, "Y"}, {3, "Y"}}), truth);
  CHECK(wrong_groups.f1 == 0.0);
}

TEST_CASE("harmonic mean and density") {
  CHECK(harmonic_mean(0.0, 0.0) == 0.0);
  CHECK(harmonic_mean(1.0, 0.0) == 0.0);
  CHECK(harmonic_mean(0.5, 0.5) == 0.5);
  CHECK(template_density(11, 21320) == doctest::Approx(0.516).epsilon(0.001));
  CHECK(template_density(338, 23921) == doctest::Approx(14.130).epsilon(0.0005));
  CHECK(template_density(1, 1000) == 1.0);
  CHECK_THROWS_AS(template_density(1, 0), std::invalid_argument);
}

TEST_CASE("normalization and partitions") {
  CHECK(normalize_template("  a \t b  ") == "a b");
  CHECK(normalize_template("") == "");
  const auto p = partition_by_template(from({{1, "a b"}, {2, "x"}, {3, "a  b"}}));
  CHECK(p == Partition{{1, 3}, {2}});
}

TEST_CASE("metrics equal the brute-force reference") {
  std::mt19937_64 rng(89);
  TemplateMap pred, truth;
  for (int trial = 0; trial < 500; ++trial) {
    random_instance(rng, pred, truth);
    const auto r = evaluate(pred, truth);
    const auto o = oracle_scores(pred, truth);
    CHECK(r.ga == o.ga);
    CHECK(r.pa == o.pa);
    CHECK(r.fga.precision == o.pga);
    CHECK(r.fga.recall == o.rga);
    CHECK(r.fga.f1 == o.fga);
    CHECK(r.fta.precision == o.pta);
    CHECK(r.fta.recall == o.rta);
    CHECK(r.fta.f1 == o.fta);
  }
}

TEST_CASE("metric invariants") {
  std::mt19937_64 rng(97);
  TemplateMap pred, truth;
  for (int trial = 0; trial < 200; ++trial) {
    random_instance(rng, pred, truth);
    const auto r = evaluate(pred, truth);
    for (double v : {r.ga, r.pa, r.fga.f1, r.fta.f1, r.fga.precision, r.fta.recall}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(r.template_density >= 0.0);

    // Renaming predicted templates consistently leaves GA and FGA alone.
    TemplateMap renamed;
    for (const auto& [id, t] : pred) renamed.emplace(id, "renamed " + normalize_template(t));
    const auto s = evaluate(renamed, truth);
    CHECK(s.ga == r.ga);
    CHECK(s.fga.f1 == r.fga.f1);

    const auto self = evaluate(truth, truth);
    CHECK(self.ga == 1.0);
    CHECK(self.pa == 1.0);
    CHECK(self.fga.f1 == 1.0);
    CHECK(self.fta.f1 == 1.0);
  }
}

TEST_CASE("report rendering") {
  const auto truth = from({{1, "a"}, {2, "b"}});
  EvaluationReport r = evaluate(truth, truth);
  r.dataset = "Toy";
  r.config["seed"] = "0";
  CHECK(r.csv_row().size() == EvaluationReport::csv_header().size());
  CHECK(r.to_table().find("Toy") != std::string::npos);
  CHECK(r.n_truth_templates == 2);
  CHECK(r.template_density == 1000.0);
}
