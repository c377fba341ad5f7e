#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "loglshd/synthetic.hpp"
#include "loglshd/template_extract.hpp"
#include "store_builder.hpp"

using namespace loglshd;
using loglshd::testing::make_store;

namespace {

// Minimum cost over every monotone, contiguous path, by plain enumeration.
void enumerate(const std::u32string& a, const std::u32string& b, std::size_t i,
               std::size_t j, std::size_t cost, std::size_t& best) {
  cost += a[i] == b[j] ? 0 : 1;
  if (cost >= best) return;  // cannot improve; remaining steps cost >= 0
  if (i + 1 == a.size() && j + 1 == b.size()) {
    best = cost;
    return;
  }
  if (i + 1 < a.size() && j + 1 < b.size()) enumerate(a, b, i + 1, j + 1, cost, best);
  if (i + 1 < a.size()) enumerate(a, b, i + 1, j, cost, best);
  if (j + 1 < b.size()) enumerate(a, b, i, j + 1, cost, best);
}

std::size_t brute_force_cost(const std::u32string& a, const std::u32string& b) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  enumerate(a, b, 0, 0, 0, best);
  return best;
}

std::u32string random_u32(std::mt19937_64& rng, std::size_t max_len, std::u32string_view alphabet) {
  std::u32string s(1 + rng() % max_len, U'a');
  for (auto& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

void check_path_shape(const AlignmentPath& p, std::size_t n, std::size_t m) {
  REQUIRE_FALSE(p.steps.empty());
  CHECK(p.steps.front() == AlignmentStep{0, 0});
  CHECK(p.steps.back() == AlignmentStep{n - 1, m - 1});
  for (std::size_t k = 1; k < p.steps.size(); ++k) {
    const std::size_t di = p.steps[k].i - p.steps[k - 1].i;
    const std::size_t dj = p.steps[k].j - p.steps[k - 1].j;
    CHECK(di <= 1);
    CHECK(dj <= 1);
    CHECK(di + dj >= 1);
  }
}

std::size_t path_cost(const AlignmentPath& p, std::u32string_view a, std::u32string_view b) {
  std::size_t c = 0;
  for (const auto& s : p.steps) c += a[s.i] == b[s.j] ? 0 : 1;
  return c;
}

std::string strip_placeholders(std::string_view t) {
  std::string out;
  for (std::size_t i = 0; i < t.size();) {
    if (t.substr(i).starts_with(kPlaceholder)) {
      i += kPlaceholder.size();
    } else {
      out += t[i++];
    }
  }
  return out;
}

bool is_subsequence(std::string_view needle, std::string_view hay) {
  std::size_t k = 0;
  for (char c : hay) {
    if (k < needle.size() && needle[k] == c) ++k;
  }
  return k == needle.size();
}

}  // namespace

TEST_CASE("dtw on identical sequences is the diagonal") {
  const std::u32string s = U"Found block";
  const auto p = dtw_align(s, s);
  CHECK(p.cost == 0);
  REQUIRE(p.steps.size() == s.size());
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(p.steps[k] == AlignmentStep{k, k});
}

TEST_CASE("dtw pairs the shared character") {
  const auto p = dtw_align(U"ab", U"b");
  CHECK(std::find(p.steps.begin(), p.steps.end(), AlignmentStep{1, 0}) != p.steps.end());
  CHECK(p.cost == 1);
  CHECK_THROWS_AS(dtw_align(U"", U"b"), std::invalid_argument);
  CHECK_THROWS_AS(dtw_align(U"a", U""), std::invalid_argument);
}

TEST_CASE("dtw cost equals the exhaustive minimum") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 150; ++trial) {
    const auto a = random_u32(rng, 8, U"abc");
    const auto b = random_u32(rng, 8, U"abc");
    const auto p = dtw_align(a, b);
    CHECK(p.cost == brute_force_cost(a, b));
    CHECK(path_cost(p, a, b) == p.cost);
    check_path_shape(p, a.size(), b.size());
  }
}

TEST_CASE("dtw cost is symmetric") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_u32(rng, 30, U"ab c");
    const auto b = random_u32(rng, 30, U"ab c");
    CHECK(dtw_align(a, b).cost == dtw_align(b, a).cost);
  }
}

TEST_CASE("banded dtw stays inside the band and never beats the full matrix") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_u32(rng, 25, U"abc");
    const auto b = random_u32(rng, 25, U"abc");
    const auto full = dtw_align(a, b);
    const auto banded = dtw_align(a, b, 2);
    check_path_shape(banded, a.size(), b.size());
    CHECK(banded.cost >= full.cost);
    const std::size_t window = std::max<std::size_t>(
        2, a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
    for (const auto& s : banded.steps) {
      CHECK((s.i > s.j ? s.i - s.j : s.j - s.i) <= window);
    }
    CHECK(dtw_align(a, b, 100).cost == full.cost);
  }
}

TEST_CASE("wildcard absorbs characters for free") {
  CHECK(char_cost(kWildcard, U'x') == 0);
  CHECK(char_cost(U'x', U'y') == 1);
  std::u32string skeleton = U"ab";
  skeleton.insert(skeleton.begin() + 1, kWildcard);
  CHECK(dtw_align(skeleton, U"axyzb").cost == 0);
}

TEST_CASE("merge_placeholders examples") {
  CHECK(merge_placeholders("a <*> <*> b") == "a <*> b");
  CHECK(merge_placeholders("a <*> b <*> c") == "a <*> b <*> c");
  CHECK(merge_placeholders("<*><*><*>") == "<*>");
  CHECK(merge_placeholders("a  <*>   <*>\tb") == "a <*> b");
  CHECK(merge_placeholders("x<*> <*>y") == "x<*>y");
  CHECK(merge_placeholders("no placeholders") == "no placeholders");
}

TEST_CASE("merge_placeholders is idempotent") {
  std::mt19937_64 rng(67);
  const std::vector<std::string> parts = {"<*>", " ", "  ", "a", "b", "<", "*>", "\t"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int n = static_cast<int>(rng() % 10);
    for (int k = 0; k < n; ++k) s += parts[rng() % parts.size()];
    const std::string once = merge_placeholders(s);
    CHECK(merge_placeholders(once) == once);
  }
}

TEST_CASE("common skeleton examples") {
  const std::vector<std::string> table1 = {"Found block rdd_42_20 locally",
                                           "Found block rdd_7_3 locally"};
  CHECK(common_skeleton(table1) == "Found block <*> locally");
  const std::vector<std::string> same = {"same line", "same line"};
  CHECK(common_skeleton(same) == "same line");
  const std::vector<std::string> single = {"only  one"};
  CHECK(common_skeleton(single) == "only  one");
  const std::vector<std::string> disjoint = {"aaaa", "bbbbbb", "cc"};
  CHECK(common_skeleton(disjoint) == "<*>");
  CHECK_THROWS_AS(common_skeleton(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("common skeleton recovers synthetic templates with alphabetic variables") {
  SyntheticSpec spec;
  spec.n_templates = 15;
  spec.logs_per_template = 40;
  spec.slots_per_template = 2;
  spec.alphabet = VariableAlphabet::Alphabetic;
  spec.seed = 71;
  const SyntheticCorpus corpus = generate_synthetic(spec);
  std::mt19937_64 rng(73);
  for (std::size_t t = 0; t < spec.n_templates; ++t) {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < corpus.contents.size(); ++i) {
      if (corpus.template_of[i] == t) lines.push_back(corpus.contents[i]);
    }
    // Five instantiations in which every slot takes at least two values.
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::shuffle(lines.begin(), lines.end(), rng);
      std::vector<std::string> five(lines.begin(), lines.begin() + 5);
      std::vector<std::set<std::string>> values;
      for (const auto& l : five) {
        const auto tokens = tokenize(l);
        const auto tmpl = tokenize(corpus.templates[t]);
        values.resize(tmpl.size());
        for (std::size_t k = 0; k < tmpl.size(); ++k) {
          if (tmpl[k] == kPlaceholder) values[k].insert(std::string(tokens[k]));
        }
      }
      const bool varied = std::all_of(values.begin(), values.end(), [](const auto& v) {
        return v.empty() || v.size() >= 2;
      });
      if (!varied) continue;
      CHECK_MESSAGE(common_skeleton(five) == corpus.templates[t], five[0] << " | " << five[1] << " | " << five[2] << " | " << five[3] << " | " << five[4]);
      break;
    }
  }
}

TEST_CASE("template static text is a subsequence of every sample") {
  std::mt19937_64 rng(79);
  const std::string alphabet = "abc d_1";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> contents(1 + rng() % 6);
    for (auto& c : contents) {
      const std::size_t len = 1 + rng() % 20;
      for (std::size_t k = 0; k < len; ++k) c += alphabet[rng() % alphabet.size()];
    }
    const std::string tmpl = common_skeleton(contents);
    CHECK_FALSE(tmpl.empty());
    const std::string statics = strip_placeholders(tmpl);
    for (const auto& c : contents) CHECK_MESSAGE(is_subsequence(statics, c), tmpl << " / " << c);
    CHECK(tmpl.find("<*> <*>") == std::string::npos);
    CHECK(tmpl.find("<*><*>") == std::string::npos);
  }
}

TEST_CASE("copies of one string give that string") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    std::string s;
    const std::size_t len = 1 + rng() % 30;
    for (std::size_t k = 0; k < len; ++k) s += "xy z<*>"[rng() % 7];
    const std::vector<std::string> copies(1 + rng() % 5, s);
    CHECK(common_skeleton(copies) == s);
  }
}

TEST_CASE("event ids are MD5 prefixes") {
  CHECK(event_id_for("Found block <*> locally") == "d7f24216");
  CHECK(event_id_for("<*>") == "ff52c40c");
  const Template t = make_template("a b");
  CHECK(t.event_id == "0cc9cd4d");
  CHECK(t.text == "a b");
}

TEST_CASE("sampling") {
  Cluster small{1, {0}, {1, 2, 3}};
  CHECK(sample_line_ids(small, 10, 0) == std::vector<std::size_t>{1, 2, 3});
  Cluster one{5, {0}, {5}};
  CHECK(sample_line_ids(one, 10, 0) == std::vector<std::size_t>{5});
  Cluster empty{0, {}, {}};
  CHECK_THROWS_AS(sample_line_ids(empty, 10, 0), std::logic_error);

  Cluster big{1, {0}, {}};
  for (std::size_t i = 1; i <= 10000; ++i) big.all_line_ids.push_back(i);
  const auto a = sample_line_ids(big, 10, 99);
  CHECK(a == sample_line_ids(big, 10, 99));
  CHECK(a.size() == 10);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  CHECK(a != sample_line_ids(big, 10, 100));
}

TEST_CASE("sampling is uniform over members") {
  Cluster c{1, {0}, {}};
  for (std::size_t i = 1; i <= 20; ++i) c.all_line_ids.push_back(i);
  std::map<std::size_t, int> counts;
  const int draws = 20000;
  for (int seed = 0; seed < draws; ++seed) {
    for (std::size_t id : sample_line_ids(c, 5, static_cast<std::uint64_t>(seed))) ++counts[id];
  }
  // Each id is picked with probability 1/4; binomial sd is about 61.
  for (const auto& [id, n] : counts) CHECK(std::abs(n - draws / 4) < 5 * 62);
  CHECK(counts.size() == 20);
}

TEST_CASE("assign_templates inventory") {
  SUBCASE("one cluster, three logs") {
    const auto store = make_store({"Found block rdd_1 locally", "Found block rdd_22 locally",
                                   "Found block rdd_333 locally"});
    const std::vector<Cluster> clusters = {{1, {0}, {1, 2, 3}}};
    const auto out = assign_templates(clusters, store, {});
    REQUIRE(out.rows.size() == 3);
    REQUIRE(out.templates.size() == 1);
    CHECK(out.templates[0].event_template == "Found block <*> locally");
    CHECK(out.templates[0].occurrences == 3);
    for (const auto& r : out.rows) CHECK(r.event_id == out.templates[0].event_id);
    CHECK(out.rows[1].content == "Found block rdd_22 locally");
  }
  SUBCASE("colliding clusters share one entry") {
    const auto store = make_store({"job 1 done", "job 2 done", "job 3 done", "job 4 done"});
    const std::vector<Cluster> clusters = {{1, {0}, {1, 3}}, {2, {1}, {2, 4}}};
    const auto out = assign_templates(clusters, store, {});
    REQUIRE(out.templates.size() == 1);
    CHECK(out.templates[0].occurrences == 4);
    CHECK(out.rows[0].event_id == out.rows[1].event_id);
  }
  SUBCASE("dissimilar members give the bare placeholder") {
    const auto store = make_store({"qqqq", "zzzzzz"});
    const std::vector<Cluster> clusters = {{1, {0}, {1, 2}}};
    const auto out = assign_templates(clusters, store, {});
    CHECK(out.templates[0].event_template == "<*>");
  }
  SUBCASE("coverage errors") {
    const auto store = make_store({"a", "b"});
    const std::vector<Cluster> missing = {{1, {0}, {1}}};
    CHECK_THROWS(assign_templates(missing, store, {}));
    const std::vector<Cluster> twice = {{1, {0}, {1, 2}}, {2, {1}, {2}}};
    CHECK_THROWS(assign_templates(twice, store, {}));
  }
}

TEST_CASE("extraction is deterministic and thread independent") {
  std::vector<std::string> contents;
  for (int i = 0; i < 300; ++i) {
    contents.push_back("worker " + std::to_string(i % 7) + " finished task " +
                       std::to_string(i * 37 % 101) + " in " + std::to_string(i) + "ms");
  }
  const auto store = make_store(contents);
  std::vector<Cluster> clusters;
  for (std::size_t c = 0; c < 3; ++c) {
    Cluster cl{c + 1, {c}, {}};
    for (std::size_t i = c + 1; i <= 300; i += 3) cl.all_line_ids.push_back(i);
    clusters.push_back(cl);
  }
  ExtractOptions one;
  one.seed = 7;
  ExtractOptions many = one;
  many.threads = 4;
  const auto a = assign_templates(clusters, store, one);
  const auto b = assign_templates(clusters, store, many);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].event_template == b.rows[i].event_template);
  }
}
