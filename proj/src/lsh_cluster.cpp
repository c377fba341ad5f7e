#include "loglshd/lsh_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "loglshd/hashing.hpp"
#include "loglshd/parallel.hpp"

namespace loglshd {
namespace {

constexpr std::uint64_t kBandKey = 0x6c73685f62616e64ULL;  // "lsh_band"

// Union-find whose root is always the smallest index in the set.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Composite Simpson's rule; the S-curve is a polynomial, so this is exact to
// well below the differences the optimiser has to resolve.
template <typename F>
double integrate(F&& f, double lo, double hi, int intervals = 2000) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

}  // namespace

bool is_shingle_token(std::string_view token) noexcept {
  std::size_t i = 0;
  while (i < token.size() && ((token[i] >= 'a' && token[i] <= 'z') ||
                              (token[i] >= 'A' && token[i] <= 'Z'))) {
    ++i;
  }
  if (i == 0) return false;
  while (i < token.size() && (token[i] == '.' || token[i] == ',')) ++i;
  return i == token.size();
}

ShingleSet filter_tokens(std::span<const std::string_view> tokens) {
  ShingleSet set;
  for (auto t : tokens) {
    if (is_shingle_token(t)) set.emplace(t);
  }
  return set;
}

ShingleSet shingles_of(std::string_view content) {
  const auto tokens = tokenize(content);
  return filter_tokens(tokens);
}

MinHasher::MinHasher(std::size_t signature_length, std::uint64_t seed)
    : token_seed_(mix64(seed ^ 0x746f6b656e5f6b65ULL)), keys_(signature_length) {
  if (signature_length == 0) {
    throw std::invalid_argument("signature length must be >= 1");
  }
  SplitMix64 rng(seed);
  for (auto& k : keys_) k = rng();
}

MinHashSignature MinHasher::operator()(const ShingleSet& shingles) const {
  MinHashSignature sig{std::vector<std::uint64_t>(keys_.size(), kEmptySetSentinel)};
  for (const auto& token : shingles) {
    const std::uint64_t base = hash_bytes(token, token_seed_);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      sig.values[i] = std::min(sig.values[i], mix64(base ^ keys_[i]));
    }
  }
  return sig;
}

MinHashSignature minhash(const ShingleSet& shingles, std::size_t d,
                         std::uint64_t seed) {
  return MinHasher(d, seed)(shingles);
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.values.size() != b.values.size()) {
    throw std::logic_error("estimate_jaccard: signature lengths differ");
  }
  if (a.values.empty()) return 1.0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    equal += a.values[i] == b.values[i];
  }
  return static_cast<double>(equal) / static_cast<double>(a.values.size());
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

double candidate_probability(double similarity, BandLayout layout) noexcept {
  return 1.0 - std::pow(1.0 - std::pow(similarity, static_cast<double>(layout.rows)),
                        static_cast<double>(layout.bands));
}

BandLayout optimize_bands(std::size_t d, double threshold) {
  if (d == 0) throw std::invalid_argument("signature length must be >= 1");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1]");
  }
  BandLayout best{d, 1};
  double best_error = std::numeric_limits<double>::infinity();
  for (std::size_t b = 1; b <= d; ++b) {
    if (d % b) continue;
    const BandLayout layout{b, d / b};
    auto p = [layout](double s) { return candidate_probability(s, layout); };
    const double false_positive = integrate(p, 0.0, threshold);
    const double false_negative =
        integrate([&](double s) { return 1.0 - p(s); }, threshold, 1.0);
    const double error = 0.5 * false_positive + 0.5 * false_negative;
    if (error < best_error) {
      best_error = error;
      best = layout;
    }
  }
  return best;
}

LshIndex::LshIndex(BandLayout layout) : layout_(layout), bands_(layout.bands) {
  if (layout.bands == 0 || layout.rows == 0) {
    throw std::invalid_argument("band layout needs b >= 1 and r >= 1");
  }
}

std::uint64_t LshIndex::band_hash(std::span<const std::uint64_t> band,
                                  std::size_t band_index) noexcept {
  std::uint64_t h = mix64(kBandKey ^ band_index);
  for (std::uint64_t v : band) h = mix64(h ^ mix64(v));
  return h;
}

void LshIndex::insert(std::size_t id, const MinHashSignature& signature) {
  if (signature.values.size() != layout_.bands * layout_.rows) {
    throw std::invalid_argument("signature length does not equal b * r");
  }
  const std::span<const std::uint64_t> values(signature.values);
  for (std::size_t b = 0; b < layout_.bands; ++b) {
    bands_[b].push_back(
        Entry{band_hash(values.subspan(b * layout_.rows, layout_.rows), b), id});
  }
}

std::vector<std::pair<std::size_t, std::size_t>> LshIndex::candidate_pairs()
    const {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& band : bands_) {
    std::vector<Entry> sorted = band;
    std::sort(sorted.begin(), sorted.end());
    std::size_t run = 0;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
      if (i < sorted.size() && sorted[i].hash == sorted[run].hash) continue;
      for (std::size_t x = run; x < i; ++x) {
        for (std::size_t y = x + 1; y < i; ++y) {
          pairs.emplace_back(std::min(sorted[x].id, sorted[y].id),
                             std::max(sorted[x].id, sorted[y].id));
        }
      }
      run = i;
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> find_candidate_pairs(
    std::span<const MinHashSignature> signatures, BandLayout layout) {
  LshIndex index(layout);
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    index.insert(i, signatures[i]);
  }
  return index.candidate_pairs();
}

void MergeOptions::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("jaccard threshold must lie in (0, 1]");
  }
  if (signature_length == 0) {
    throw std::invalid_argument("signature length must be >= 1");
  }
}

std::vector<std::size_t> cluster_labels(std::span<const ShingleSet> shingles,
                                        const MergeOptions& options) {
  options.validate();
  const std::size_t n = shingles.size();
  DisjointSets sets(n);

  if (options.threshold >= 1.0) {
    std::map<ShingleSet, std::size_t> first_with;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = first_with.try_emplace(shingles[i], i);
      if (!inserted) sets.unite(it->second, i);
    }
  } else {
    const MinHasher hasher(options.signature_length, options.seed);
    std::vector<MinHashSignature> signatures(n);
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) signatures[i] = hasher(shingles[i]);
    });

    // Identical signatures always verify (estimate 1), so they are united up
    // front and only one of them enters the index.
    std::map<std::vector<std::uint64_t>, std::size_t> first_with;
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, inserted] = first_with.try_emplace(signatures[i].values, i);
      if (inserted) {
        distinct.push_back(i);
      } else {
        sets.unite(it->second, i);
      }
    }

    LshIndex index(optimize_bands(options.signature_length, options.threshold));
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      index.insert(k, signatures[distinct[k]]);
    }
    for (const auto& [x, y] : index.candidate_pairs()) {
      const std::size_t a = distinct[x];
      const std::size_t b = distinct[y];
      if (estimate_jaccard(signatures[a], signatures[b]) >=
          options.threshold - 1e-12) {
        sets.unite(a, b);
      }
    }
  }

  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = sets.find(i);
  return labels;
}

std::vector<Cluster> merge_clusters(std::span<const InitialGroup> groups,
                                    const RecordStore& store,
                                    const MergeOptions& options) {
  std::vector<ShingleSet> shingles(groups.size());
  parallel_for(groups.size(), options.threads,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t g = begin; g < end; ++g) {
                   shingles[g] =
                       shingles_of(store.text_of(groups[g].representative_id()));
                 }
               });
  const auto labels = cluster_labels(shingles, options);

  std::vector<Cluster> clusters;
  std::map<std::size_t, std::size_t> cluster_of_label;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto [it, inserted] = cluster_of_label.try_emplace(labels[g], clusters.size());
    if (inserted) clusters.emplace_back();
    Cluster& cluster = clusters[it->second];
    cluster.member_group_ids.push_back(g);
    cluster.all_line_ids.insert(cluster.all_line_ids.end(),
                                groups[g].member_ids.begin(),
                                groups[g].member_ids.end());
  }
  for (auto& cluster : clusters) {
    std::sort(cluster.all_line_ids.begin(), cluster.all_line_ids.end());
    cluster.cluster_id = cluster.all_line_ids.front();
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) {
              return a.cluster_id < b.cluster_id;
            });
  return clusters;
}

}  // namespace loglshd
