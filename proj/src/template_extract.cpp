#include "loglshd/template_extract.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <openssl/evp.h>

#include "loglshd/hashing.hpp"
#include "loglshd/parallel.hpp"
#include "loglshd/text.hpp"

namespace loglshd {
namespace {

constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

constexpr char32_t kDynamic = kWildcard;

struct SkeletonChar {
  char32_t ch;
  bool dynamic;
};

std::vector<SkeletonChar> fold_step(const std::vector<SkeletonChar>& skeleton,
                                    std::u32string_view next,
                                    std::optional<std::size_t> band) {
  std::u32string lhs;
  lhs.reserve(skeleton.size());
  for (const auto& s : skeleton) lhs.push_back(s.dynamic ? kDynamic : s.ch);

  const AlignmentPath path = dtw_align(lhs, next, band);

  // Matched pairs must be strictly increasing in both coordinates, so each
  // character is kept at most once and the kept characters form a common
  // subsequence of both inputs.
  std::vector<AlignmentStep> kept;
  for (const auto& step : path.steps) {
    if (lhs[step.i] == kDynamic || lhs[step.i] != next[step.j]) continue;
    if (!kept.empty() && (step.i <= kept.back().i || step.j <= kept.back().j)) {
      continue;
    }
    kept.push_back(step);
  }

  std::vector<SkeletonChar> out;
  out.reserve(kept.size() + 4);
  const SkeletonChar hole{kDynamic, true};
  auto is_ws = [](char32_t c) { return c != kDynamic && text::is_space(c); };

  // Dropped spans [i0, i1) of the skeleton and [j0, j1) of `next`. DTW may
  // stretch a match across a word boundary and leave the separating
  // whitespace unpaired; whitespace at the same edge of both spans is shared,
  // so it is kept to preserve the token boundary.
  auto emit_gap = [&](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
    if (i0 == i1 && j0 == j1) return;
    bool trailing = false;
    char32_t trailing_ch = 0;
    if (i0 < i1 && j0 < j1 && is_ws(lhs[i0]) && is_ws(next[j0])) {
      out.push_back({lhs[i0], false});
      ++i0;
      ++j0;
    }
    if (i0 < i1 && j0 < j1 && is_ws(lhs[i1 - 1]) && is_ws(next[j1 - 1])) {
      trailing = true;
      trailing_ch = lhs[i1 - 1];
      --i1;
      --j1;
    }
    if (i0 < i1 || j0 < j1) out.push_back(hole);
    if (trailing) out.push_back({trailing_ch, false});
  };

  if (kept.empty()) {
    emit_gap(0, lhs.size(), 0, next.size());
    return out;
  }
  emit_gap(0, kept.front().i, 0, kept.front().j);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (k > 0) emit_gap(kept[k - 1].i + 1, kept[k].i, kept[k - 1].j + 1, kept[k].j);
    out.push_back(SkeletonChar{lhs[kept[k].i], false});
  }
  emit_gap(kept.back().i + 1, lhs.size(), kept.back().j + 1, next.size());
  return out;
}

std::string render(const std::vector<SkeletonChar>& skeleton) {
  std::string out;
  std::size_t i = 0;
  while (i < skeleton.size()) {
    if (!skeleton[i].dynamic && text::is_space(skeleton[i].ch)) {
      text::append_utf8(out, skeleton[i].ch);
      ++i;
      continue;
    }
    std::size_t end = i;
    bool dynamic = false;
    while (end < skeleton.size() &&
           (skeleton[end].dynamic || !text::is_space(skeleton[end].ch))) {
      dynamic = dynamic || skeleton[end].dynamic;
      ++end;
    }
    if (dynamic) {
      out += kPlaceholder;
    } else {
      for (std::size_t k = i; k < end; ++k) text::append_utf8(out, skeleton[k].ch);
    }
    i = end;
  }
  return out;
}

}  // namespace

AlignmentPath dtw_align(std::u32string_view a, std::u32string_view b,
                        std::optional<std::size_t> band) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("dtw_align: sequences must be non-empty");
  }
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::size_t window = std::numeric_limits<std::size_t>::max();
  if (band) window = std::max(*band, n > m ? n - m : m - n);
  auto inside = [&](std::size_t i, std::size_t j) {
    return (i > j ? i - j : j - i) <= window;
  };

  std::vector<std::uint32_t> cost(n * m, kUnreachable);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& {
    return cost[i * m + j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inside(i, j)) continue;
      const auto c = static_cast<std::uint32_t>(char_cost(a[i], b[j]));
      if (i == 0 && j == 0) {
        at(i, j) = c;
        continue;
      }
      std::uint32_t best = kUnreachable;
      if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1));
      if (i > 0) best = std::min(best, at(i - 1, j));
      if (j > 0) best = std::min(best, at(i, j - 1));
      if (best != kUnreachable) at(i, j) = best + c;
    }
  }

  AlignmentPath path;
  path.cost = at(n - 1, m - 1);
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  path.steps.push_back({i, j});
  while (i > 0 || j > 0) {
    const std::uint32_t diag = (i > 0 && j > 0) ? at(i - 1, j - 1) : kUnreachable;
    const std::uint32_t up = i > 0 ? at(i - 1, j) : kUnreachable;
    const std::uint32_t left = j > 0 ? at(i, j - 1) : kUnreachable;
    if (diag <= up && diag <= left && diag != kUnreachable) {
      --i;
      --j;
    } else if (up <= left && up != kUnreachable) {
      --i;
    } else {
      --j;
    }
    path.steps.push_back({i, j});
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::string merge_placeholders(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!text.substr(i).starts_with(kPlaceholder)) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    // Consume <*> (ws* <*>)* as one placeholder.
    std::size_t end = i + kPlaceholder.size();
    for (;;) {
      std::size_t k = end;
      while (k < text.size() && text::is_space(text[k])) ++k;
      if (!text.substr(k).starts_with(kPlaceholder)) break;
      end = k + kPlaceholder.size();
    }
    if (!out.empty() && text::is_space(out.back())) {
      while (!out.empty() && text::is_space(out.back())) out.pop_back();
      out.push_back(' ');
    }
    out += kPlaceholder;
    i = end;
    if (i < text.size() && text::is_space(text[i])) {
      while (i < text.size() && text::is_space(text[i])) ++i;
      out.push_back(' ');
    }
  }
  return out;
}

std::string common_skeleton(std::span<const std::string> contents,
                            std::optional<std::size_t> band) {
  if (contents.empty()) {
    throw std::invalid_argument("common_skeleton: no contents");
  }
  if (contents.size() == 1) return contents.front();

  std::vector<SkeletonChar> skeleton;
  for (char32_t c : text::decode_utf8(contents.front())) {
    skeleton.push_back({c, false});
  }
  for (std::size_t k = 1; k < contents.size(); ++k) {
    const std::u32string next = text::decode_utf8(contents[k]);
    if (skeleton.empty() || next.empty()) {
      skeleton.assign(1, SkeletonChar{kDynamic, true});
      continue;
    }
    skeleton = fold_step(skeleton, next, band);
  }
  return merge_placeholders(render(skeleton));
}

std::string event_id_for(std::string_view template_text) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(template_text.data(), template_text.size(), digest.data(),
                 &length, EVP_md5(), nullptr) != 1) {
    throw std::runtime_error("MD5 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  for (std::size_t i = 0; i < 4; ++i) {
    id.push_back(kHex[digest[i] >> 4]);
    id.push_back(kHex[digest[i] & 0xF]);
  }
  return id;
}

Template make_template(std::string text) {
  Template t;
  t.event_id = event_id_for(text);
  t.text = std::move(text);
  return t;
}

std::vector<std::size_t> sample_line_ids(const Cluster& cluster, std::size_t k,
                                         std::uint64_t seed) {
  const auto& ids = cluster.all_line_ids;
  if (ids.empty()) throw std::logic_error("cannot sample an empty cluster");
  if (k == 0) throw std::invalid_argument("sample size must be >= 1");
  if (ids.size() <= k) return ids;

  // Floyd's algorithm: k distinct positions in O(k) draws.
  SplitMix64 rng(seed);
  std::unordered_set<std::size_t> chosen;
  const std::size_t n = ids.size();
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::size_t> positions(chosen.begin(), chosen.end());
  std::sort(positions.begin(), positions.end());
  std::vector<std::size_t> sample;
  sample.reserve(positions.size());
  for (std::size_t p : positions) sample.push_back(ids[p]);
  return sample;
}

std::vector<std::string> sample_representatives(const Cluster& cluster,
                                                const RecordStore& store,
                                                std::size_t k,
                                                std::uint64_t seed) {
  std::vector<std::string> contents;
  for (std::size_t id : sample_line_ids(cluster, k, seed)) {
    contents.emplace_back(store.text_of(id));
  }
  return contents;
}

Template extract_template(const Cluster& cluster, const RecordStore& store,
                          const ExtractOptions& options) {
  const std::uint64_t seed = mix64(options.seed ^ mix64(cluster.cluster_id));
  const auto samples =
      sample_representatives(cluster, store, options.sample_size, seed);
  return make_template(common_skeleton(samples, options.dtw_band));
}

StructuredOutput assign_templates(std::span<const Cluster> clusters,
                                  const RecordStore& store,
                                  const ExtractOptions& options) {
  std::vector<Template> templates(clusters.size());
  parallel_for(clusters.size(), options.threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t c = begin; c < end; ++c) {
                   templates[c] = extract_template(clusters[c], store, options);
                 }
               });

  // Cluster index per stored record.
  std::vector<std::size_t> cluster_of(store.size(), clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t id : clusters[c].all_line_ids) {
      const auto index = store.index_of(id);
      if (!index) {
        throw std::invalid_argument("cluster references unknown line id " +
                                    std::to_string(id));
      }
      if (cluster_of[*index] != clusters.size()) {
        throw std::invalid_argument("line id " + std::to_string(id) +
                                    " appears in two clusters");
      }
      cluster_of[*index] = c;
    }
  }

  StructuredOutput output;
  output.rows.reserve(store.size());
  std::unordered_map<std::string, std::size_t> inventory;
  for (std::size_t i = 0; i < store.size(); ++i) {
    if (cluster_of[i] == clusters.size()) {
      throw std::invalid_argument(
          "line id " + std::to_string(store.record(i).line_id) +
          " is not covered by any cluster");
    }
    const Template& t = templates[cluster_of[i]];
    auto [it, inserted] = inventory.try_emplace(t.text, output.templates.size());
    if (inserted) output.templates.push_back({t.event_id, t.text, 0});
    ++output.templates[it->second].occurrences;
    output.rows.push_back(
        {store.record(i).line_id, store.record(i).content, t.event_id, t.text});
  }
  return output;
}

}  // namespace loglshd
