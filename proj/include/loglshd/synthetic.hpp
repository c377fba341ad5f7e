#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace loglshd {

enum class VariableAlphabet {
  NonAlphabetic,  // every value contains digits, so it never survives the token filter
  Alphabetic,     // lowercase words drawn from a small per-slot pool
  Mixed,          // slots alternate between the two kinds
};

VariableAlphabet parse_alphabet(std::string_view name);
std::string_view to_string(VariableAlphabet alphabet) noexcept;

/// Recipe for a corpus whose templates and assignments are known exactly.
///
/// Every template starts with a capitalised word whose initial is unique
/// among the first 26 templates, static words are never reused across
/// templates, and variable slots are never adjacent.
struct SyntheticSpec {
  std::size_t n_templates = 20;
  std::size_t logs_per_template = 500;
  std::size_t slots_per_template = 2;
  std::size_t min_words = 4;  // static words per template
  std::size_t max_words = 10;
  VariableAlphabet alphabet = VariableAlphabet::NonAlphabetic;
  std::size_t alphabetic_pool = 6;  // distinct values per alphabetic slot
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a count is zero or slots cannot be
  /// placed without adjacency.
  void validate() const;
};

struct SyntheticCorpus {
  std::string log_format;              // format of `lines`
  std::vector<std::string> templates;  // with `<*>` at every slot
  std::vector<std::string> lines;      // full log lines, shuffled
  std::vector<std::string> contents;   // content part of each line
  std::vector<std::size_t> template_of;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

struct SyntheticFiles {
  std::filesystem::path log;           // <name>.log
  std::filesystem::path ground_truth;  // <name>_structured.csv
};

/// Writes the log and a Loghub-style ground truth
/// (LineId, Content, EventId, EventTemplate).
SyntheticFiles write_synthetic(const SyntheticCorpus& corpus,
                               const std::filesystem::path& dir,
                               std::string_view name);

}  // namespace loglshd
