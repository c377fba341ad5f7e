#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "loglshd/corpus_io.hpp"
#include "loglshd/csv.hpp"
#include "loglshd/lsh_cluster.hpp"
#include "loglshd/synthetic.hpp"
#include "temp_dir.hpp"

using namespace loglshd;

TEST_CASE("counts and ground truth") {
  SyntheticSpec one;
  one.n_templates = 1;
  one.logs_per_template = 5;
  const auto c1 = generate_synthetic(one);
  CHECK(c1.lines.size() == 5);
  CHECK(std::set<std::size_t>(c1.template_of.begin(), c1.template_of.end()).size() == 1);

  SyntheticSpec big;
  const auto c2 = generate_synthetic(big);
  CHECK(c2.lines.size() == 10000);
  CHECK(c2.templates.size() == 20);
  CHECK(std::set<std::string>(c2.templates.begin(), c2.templates.end()).size() == 20);
}

TEST_CASE("files parse back with the declared format") {
  SyntheticSpec spec;
  spec.n_templates = 4;
  spec.logs_per_template = 25;
  const auto corpus = generate_synthetic(spec);
  loglshd::testing::TempDir dir;
  const auto files = write_synthetic(corpus, dir.path(), "syn");
  const auto parsed = parse_log_file(files.log, LogFormat::parse(corpus.log_format));
  REQUIRE(parsed.records.size() == 100);
  CHECK(parsed.rejects.skipped_lines.empty());
  for (std::size_t i = 0; i < 100; ++i) CHECK(parsed.records[i].content == corpus.contents[i]);

  const auto truth = read_template_column(files.ground_truth);
  REQUIRE(truth.entries.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(truth.entries[i].second == corpus.templates[corpus.template_of[i]]);
  }
}

TEST_CASE("fixed seed gives byte-identical files") {
  SyntheticSpec spec;
  spec.n_templates = 6;
  spec.logs_per_template = 30;
  spec.alphabet = VariableAlphabet::Mixed;
  spec.seed = 5;
  loglshd::testing::TempDir a, b;
  const auto fa = write_synthetic(generate_synthetic(spec), a.path(), "x");
  const auto fb = write_synthetic(generate_synthetic(spec), b.path(), "x");
  CHECK(loglshd::testing::read_file(fa.log) == loglshd::testing::read_file(fb.log));
  CHECK(loglshd::testing::read_file(fa.ground_truth) ==
        loglshd::testing::read_file(fb.ground_truth));
  spec.seed = 6;
  loglshd::testing::TempDir c;
  const auto fc = write_synthetic(generate_synthetic(spec), c.path(), "x");
  CHECK(loglshd::testing::read_file(fa.log) != loglshd::testing::read_file(fc.log));
}

TEST_CASE("variable alphabets") {
  SyntheticSpec spec;
  spec.n_templates = 5;
  spec.logs_per_template = 50;
  spec.alphabet = VariableAlphabet::NonAlphabetic;
  // Numeric variables never survive the token filter, so every line of a
  // template has the same shingles.
  const auto numeric = generate_synthetic(spec);
  for (std::size_t i = 0; i < numeric.contents.size(); ++i) {
    CHECK(shingles_of(numeric.contents[i]) == shingles_of(numeric.templates[numeric.template_of[i]]));
  }
  spec.alphabet = VariableAlphabet::Alphabetic;
  const auto alpha = generate_synthetic(spec);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < alpha.contents.size(); ++i) {
    differing += shingles_of(alpha.contents[i]) != shingles_of(alpha.templates[alpha.template_of[i]]);
  }
  CHECK(differing == alpha.contents.size());
}

TEST_CASE("synthetic settings validation and alphabet names") {
  SyntheticSpec bad;
  bad.n_templates = 0;
  CHECK_THROWS_AS(generate_synthetic(bad), std::invalid_argument);
  SyntheticSpec crowded;
  crowded.slots_per_template = 9;
  crowded.min_words = 4;
  CHECK_THROWS_AS(generate_synthetic(crowded), std::invalid_argument);
  CHECK(parse_alphabet("alphabetic") == VariableAlphabet::Alphabetic);
  CHECK(parse_alphabet("numeric") == VariableAlphabet::NonAlphabetic);
  CHECK(to_string(VariableAlphabet::Mixed) == "mixed");
  CHECK_THROWS_AS(parse_alphabet("greek"), std::invalid_argument);
}
