#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loglshd/corpus_io.hpp"
#include "loglshd/initial_grouping.hpp"

namespace loglshd {

/// Deduplicated, sorted set of filtered tokens.
using ShingleSet = std::set<std::string, std::less<>>;

/// True iff the token fully matches ^[a-zA-Z]+[.,]*$ : letters, optionally
/// followed by periods/commas.
bool is_shingle_token(std::string_view token) noexcept;

ShingleSet filter_tokens(std::span<const std::string_view> tokens);
ShingleSet shingles_of(std::string_view content);

inline constexpr std::uint64_t kEmptySetSentinel =
    std::numeric_limits<std::uint64_t>::max();

struct MinHashSignature {
  std::vector<std::uint64_t> values;

  bool operator==(const MinHashSignature&) const = default;
};

/// d keyed 64-bit hash functions derived from a seed. Token bytes are hashed
/// once; each function then re-mixes that hash with its own key.
class MinHasher {
 public:
  MinHasher(std::size_t signature_length, std::uint64_t seed);

  std::size_t signature_length() const noexcept { return keys_.size(); }
  MinHashSignature operator()(const ShingleSet& shingles) const;

 private:
  std::uint64_t token_seed_;
  std::vector<std::uint64_t> keys_;
};

/// Signature of a shingle set; the empty set maps to all kEmptySetSentinel.
MinHashSignature minhash(const ShingleSet& shingles, std::size_t d,
                         std::uint64_t seed);

/// Fraction of agreeing positions. Throws std::logic_error on a length
/// mismatch.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

/// Exact |a ∩ b| / |a ∪ b|; two empty sets have similarity 1.
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

struct BandLayout {
  std::size_t bands = 1;
  std::size_t rows = 1;

  bool operator==(const BandLayout&) const = default;
};

/// Probability that two signatures of similarity s share at least one band:
/// 1 - (1 - s^r)^b.
double candidate_probability(double similarity, BandLayout layout) noexcept;

/// Chooses b * r = d minimising the equally weighted false-positive area
/// (S-curve below the threshold) plus false-negative area (above it).
BandLayout optimize_bands(std::size_t d, double threshold);

/// Buckets signatures band by band; a band's bucket is a keyed 64-bit hash
/// of its r values.
class LshIndex {
 public:
  explicit LshIndex(BandLayout layout);

  BandLayout layout() const noexcept { return layout_; }
  /// Throws std::invalid_argument if the signature length is not b * r.
  void insert(std::size_t id, const MinHashSignature& signature);
  /// Unordered pairs (x < y) sharing at least one bucket, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> candidate_pairs() const;

  static std::uint64_t band_hash(std::span<const std::uint64_t> band,
                                 std::size_t band_index) noexcept;

 private:
  struct Entry {
    std::uint64_t hash;
    std::size_t id;
    auto operator<=>(const Entry&) const = default;
  };
  BandLayout layout_;
  std::vector<std::vector<Entry>> bands_;
};

/// Candidate pairs over signatures indexed by id (position in the span).
std::vector<std::pair<std::size_t, std::size_t>> find_candidate_pairs(
    std::span<const MinHashSignature> signatures, BandLayout layout);

struct MergeOptions {
  double threshold = 0.9;
  std::size_t signature_length = 50;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  /// Throws std::invalid_argument unless 0 < threshold <= 1 and d >= 1.
  void validate() const;
};

/// Connected-component label for each shingle set: the smallest index in its
/// component. At threshold 1 sets merge iff equal; below 1, sets merge
/// through LSH candidate pairs whose estimated Jaccard reaches the threshold.
std::vector<std::size_t> cluster_labels(std::span<const ShingleSet> shingles,
                                        const MergeOptions& options);

struct Cluster {
  std::size_t cluster_id = 0;  // smallest contained line id
  std::vector<std::size_t> member_group_ids;  // indices into the group list
  std::vector<std::size_t> all_line_ids;      // ascending
};

/// Merges initial groups by comparing their representatives' shingles.
/// Clusters are returned in ascending cluster_id order.
std::vector<Cluster> merge_clusters(std::span<const InitialGroup> groups,
                                    const RecordStore& store,
                                    const MergeOptions& options);

}  // namespace loglshd
