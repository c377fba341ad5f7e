#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loglshd/corpus_io.hpp"
#include "loglshd/lsh_cluster.hpp"

namespace loglshd {

struct AlignmentStep {
  std::size_t i = 0;
  std::size_t j = 0;

  bool operator==(const AlignmentStep&) const = default;
};

/// Monotone, contiguous warping path from (0, 0) to (|a|-1, |b|-1).
struct AlignmentPath {
  std::vector<AlignmentStep> steps;
  std::size_t cost = 0;  // number of steps pairing unequal characters
};

/// Marks a dynamic span inside a partially built skeleton. It is not a code
/// point, so decoded text never contains it.
inline constexpr char32_t kWildcard = 0xFFFFFFFFu;

/// Cost of aligning two characters: 0 if equal, 1 otherwise. A wildcard
/// absorbs any character for free.
constexpr std::size_t char_cost(char32_t a, char32_t b) noexcept {
  return (a == b || a == kWildcard || b == kWildcard) ? 0 : 1;
}

/// Dynamic time warping under char_cost. Among optimal paths, backtracking
/// prefers the diagonal predecessor, then (i-1, j), then (i, j-1).
///
/// `band` restricts cells to |i - j| <= max(band, ||a| - |b||) (Sakoe-Chiba).
/// Throws std::invalid_argument if either sequence is empty.
AlignmentPath dtw_align(std::u32string_view a, std::u32string_view b,
                        std::optional<std::size_t> band = std::nullopt);

/// Collapses each run of `<*>` separated only by whitespace into one `<*>`,
/// leaving a single space on either side where there was whitespace.
std::string merge_placeholders(std::string_view text);

/// Folds DTW over the contents (in the given order), keeping the characters
/// every content shares. Dynamic spans become `<*>`, a whitespace-delimited
/// token that contains a dynamic span is masked whole, and adjacent
/// placeholders are merged. A single content is returned verbatim.
std::string common_skeleton(std::span<const std::string> contents,
                            std::optional<std::size_t> band = std::nullopt);

struct Template {
  std::string text;
  std::string event_id;  // first 8 hex digits of MD5(text)
};

std::string event_id_for(std::string_view template_text);
Template make_template(std::string text);

/// Up to k distinct line ids drawn uniformly without replacement, ascending.
/// Throws std::logic_error for an empty cluster.
std::vector<std::size_t> sample_line_ids(const Cluster& cluster, std::size_t k,
                                         std::uint64_t seed);

/// Preprocessed contents of sample_line_ids(), in line id order.
std::vector<std::string> sample_representatives(const Cluster& cluster,
                                                const RecordStore& store,
                                                std::size_t k,
                                                std::uint64_t seed);

struct ExtractOptions {
  std::size_t sample_size = 10;
  std::uint64_t seed = 0;
  std::optional<std::size_t> dtw_band;
  std::size_t threads = 1;
};

/// Template for one cluster. The sampling seed is derived from options.seed
/// and the cluster id, so results do not depend on processing order.
Template extract_template(const Cluster& cluster, const RecordStore& store,
                          const ExtractOptions& options);

/// Gives every line its cluster's template. Clusters producing the same text
/// share one inventory entry. Rows carry the original (unpreprocessed)
/// content.
StructuredOutput assign_templates(std::span<const Cluster> clusters,
                                  const RecordStore& store,
                                  const ExtractOptions& options);

}  // namespace loglshd
