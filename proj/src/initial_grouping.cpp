#include "loglshd/initial_grouping.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "loglshd/hashing.hpp"
#include "loglshd/parallel.hpp"
#include "loglshd/text.hpp"

namespace loglshd {

std::string_view to_string(CharPosition position) noexcept {
  switch (position) {
    case CharPosition::First: return "first";
    case CharPosition::P25: return "p25";
    case CharPosition::P50: return "p50";
    case CharPosition::P75: return "p75";
    case CharPosition::Last: return "last";
  }
  return "?";
}

std::size_t position_index(CharPosition position, std::size_t length) noexcept {
  const std::size_t span = length ? length - 1 : 0;
  switch (position) {
    case CharPosition::First: return 0;
    case CharPosition::P25: return span / 4;
    case CharPosition::P50: return span / 2;
    case CharPosition::P75: return 3 * span / 4;
    case CharPosition::Last: return span;
  }
  return 0;
}

GroupingStrategy GroupingStrategy::defaults() {
  return GroupingStrategy{
      true, true, {CharPosition::First, CharPosition::P25, CharPosition::P50}};
}

GroupingStrategy GroupingStrategy::parse(std::string_view spec) {
  GroupingStrategy strategy{false, false, {}};
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t stop = spec.find('+', start);
    if (stop == std::string_view::npos) stop = spec.size();
    const std::string_view term = spec.substr(start, stop - start);
    start = stop + 1;
    if (term == "base") {
      strategy.use_token_count = strategy.use_content_length = true;
    } else if (term == "tokens") {
      strategy.use_token_count = true;
    } else if (term == "length") {
      strategy.use_content_length = true;
    } else if (term == "first") {
      strategy.positions.push_back(CharPosition::First);
    } else if (term == "p25") {
      strategy.positions.push_back(CharPosition::P25);
    } else if (term == "p50") {
      strategy.positions.push_back(CharPosition::P50);
    } else if (term == "p75") {
      strategy.positions.push_back(CharPosition::P75);
    } else if (term == "last") {
      strategy.positions.push_back(CharPosition::Last);
    } else {
      throw std::invalid_argument("unknown grouping term '" +
                                  std::string(term) + "' in '" +
                                  std::string(spec) + "'");
    }
  }
  std::sort(strategy.positions.begin(), strategy.positions.end());
  strategy.positions.erase(
      std::unique(strategy.positions.begin(), strategy.positions.end()),
      strategy.positions.end());
  if (!strategy.use_token_count && !strategy.use_content_length &&
      strategy.positions.empty()) {
    throw std::invalid_argument("grouping strategy enables no criterion");
  }
  return strategy;
}

std::string GroupingStrategy::to_string() const {
  std::string out;
  auto add = [&out](std::string_view term) {
    if (!out.empty()) out += '+';
    out += term;
  };
  if (use_token_count && use_content_length) {
    add("base");
  } else if (use_token_count) {
    add("tokens");
  } else if (use_content_length) {
    add("length");
  }
  for (auto p : positions) add(loglshd::to_string(p));
  return out;
}

std::size_t GroupKeyHash::operator()(const GroupKey& key) const noexcept {
  std::uint64_t h = mix64(key.token_count.value_or(~0ull));
  h = mix64(h ^ key.content_length.value_or(~0ull));
  for (char32_t c : key.position_chars) h = mix64(h ^ c);
  return static_cast<std::size_t>(h);
}

std::vector<std::string_view> tokenize(std::string_view content) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < content.size()) {
    while (i < content.size() && text::is_space(content[i])) ++i;
    const std::size_t start = i;
    while (i < content.size() && !text::is_space(content[i])) ++i;
    if (i > start) tokens.push_back(content.substr(start, i - start));
  }
  return tokens;
}

std::size_t count_tokens(std::string_view content) noexcept {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : content) {
    const bool space = text::is_space(c);
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

GroupKey group_key(std::string_view content, const GroupingStrategy& strategy) {
  GroupKey key;
  if (strategy.use_token_count) key.token_count = count_tokens(content);
  if (strategy.positions.empty()) {
    if (strategy.use_content_length) {
      key.content_length = text::count_code_points(content);
    }
    return key;
  }
  const std::u32string chars = text::decode_utf8(content);
  if (strategy.use_content_length) key.content_length = chars.size();
  if (chars.empty()) return key;
  key.position_chars.reserve(strategy.positions.size());
  for (auto p : strategy.positions) {
    key.position_chars.push_back(chars[position_index(p, chars.size())]);
  }
  return key;
}

std::vector<InitialGroup> build_initial_groups(const RecordStore& store,
                                               const GroupingStrategy& strategy,
                                               std::size_t threads) {
  std::vector<GroupKey> keys(store.size());
  parallel_for(store.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      keys[i] = group_key(store.text(i), strategy);
    }
  });

  std::vector<InitialGroup> groups;
  std::unordered_map<GroupKey, std::size_t, GroupKeyHash> index;
  index.reserve(store.size() / 4 + 16);
  for (std::size_t i = 0; i < store.size(); ++i) {
    const std::size_t line_id = store.record(i).line_id;
    auto [it, inserted] = index.try_emplace(keys[i], groups.size());
    if (inserted) {
      groups.push_back(InitialGroup{std::move(keys[i]), {line_id}});
    } else {
      groups[it->second].member_ids.push_back(line_id);
    }
  }
  return groups;
}

}  // namespace loglshd
