#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loglshd/corpus_io.hpp"

namespace loglshd {

/// Character positions usable as grouping criteria, as fractions of the
/// content: 0, 0.25, 0.5, 0.75 and 1.
enum class CharPosition : std::uint8_t { First, P25, P50, P75, Last };

std::string_view to_string(CharPosition position) noexcept;

/// Index of `position` in a sequence of `length` (>= 1) characters,
/// i.e. floor(p * (length - 1)).
std::size_t position_index(CharPosition position, std::size_t length) noexcept;

struct GroupingStrategy {
  bool use_token_count = true;
  bool use_content_length = true;
  std::vector<CharPosition> positions;  // ascending, no duplicates

  /// Token count + content length, plus the first, 25% and 50% characters.
  static GroupingStrategy defaults();

  /// Parses a `+`-joined list such as "base+first+p25+p50". Recognised
  /// terms: base, tokens, length, first, p25, p50, p75, last. Throws
  /// std::invalid_argument for unknown terms or an empty criterion set.
  static GroupingStrategy parse(std::string_view spec);

  std::string to_string() const;

  bool operator==(const GroupingStrategy&) const = default;
};

struct GroupKey {
  std::optional<std::size_t> token_count;
  std::optional<std::size_t> content_length;  // in code points
  std::u32string position_chars;

  bool operator==(const GroupKey&) const = default;
};

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& key) const noexcept;
};

struct InitialGroup {
  GroupKey key;
  std::vector<std::size_t> member_ids;  // ascending line ids, never empty

  std::size_t representative_id() const { return member_ids.front(); }
};

/// Splits on runs of ASCII whitespace; never yields empty tokens.
std::vector<std::string_view> tokenize(std::string_view content);

std::size_t count_tokens(std::string_view content) noexcept;

GroupKey group_key(std::string_view content, const GroupingStrategy& strategy);

/// Partitions the store into groups of equal GroupKey, computed on the
/// preprocessed text. Groups are ordered by their first line id.
std::vector<InitialGroup> build_initial_groups(const RecordStore& store,
                                               const GroupingStrategy& strategy,
                                               std::size_t threads = 1);

}  // namespace loglshd
