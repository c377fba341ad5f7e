#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loglshd {

inline constexpr std::string_view kPlaceholder = "<*>";

/// Loghub-style log format, e.g. "<Date> <Time> <Level> <Content>".
///
/// Field names are written in angle brackets; everything else is literal
/// separator text. A backslash makes the next character literal, so the
/// Loghub spelling `\[<Time>\]` is accepted. Exactly one field must be named
/// `Content`.
class LogFormat {
 public:
  /// Throws std::invalid_argument on malformed patterns.
  static LogFormat parse(std::string_view pattern);

  const std::string& pattern() const noexcept { return pattern_; }
  const std::vector<std::string>& fields() const noexcept { return fields_; }
  /// separators()[i] precedes fields()[i]; the last entry trails the final
  /// field. Always fields().size() + 1 entries.
  const std::vector<std::string>& separators() const noexcept {
    return separators_;
  }
  std::size_t content_index() const noexcept { return content_index_; }

  /// Splits a line into one value per field, or nullopt if it does not match
  /// or the content would be empty.
  std::optional<std::vector<std::string>> match(std::string_view line) const;

  /// Inverse of match(): interleaves separators and values.
  std::string join(std::span<const std::string> values) const;

 private:
  std::string pattern_;
  std::vector<std::string> fields_;
  std::vector<std::string> separators_;
  std::size_t content_index_ = 0;
};

struct LogRecord {
  std::size_t line_id = 0;  // 1-based position in the source file
  std::vector<std::pair<std::string, std::string>> header_values;
  std::string content;

  const std::string* header(std::string_view name) const;
};

enum class MismatchPolicy { Skip, WholeLine };

struct RejectsReport {
  std::vector<std::size_t> skipped_lines;      // dropped (mismatch or empty)
  std::vector<std::size_t> passthrough_lines;  // kept as whole-line content
  std::size_t invalid_utf8_lines = 0;
  std::size_t replaced_bytes = 0;
};

struct ParsedLog {
  std::vector<LogRecord> records;
  RejectsReport rejects;
};

/// Reads a log file line by line. Throws std::runtime_error if the file
/// cannot be opened.
ParsedLog parse_log_file(const std::filesystem::path& path,
                         const LogFormat& format,
                         MismatchPolicy policy = MismatchPolicy::Skip);

/// Same as parse_log_file over in-memory text.
ParsedLog parse_log_text(std::string_view text, const LogFormat& format,
                         MismatchPolicy policy = MismatchPolicy::Skip);

/// A compiled regular expression whose matches are masked with `<*>`.
/// Patterns use Perl syntax (`\d`, `\s`, `\b`, ...).
class PreprocessRule {
 public:
  /// Throws std::invalid_argument if the pattern does not compile.
  explicit PreprocessRule(std::string pattern);

  const std::string& pattern() const noexcept { return pattern_; }
  std::string apply(std::string_view content) const;

 private:
  struct Compiled;
  std::string pattern_;
  std::shared_ptr<const Compiled> compiled_;
};

/// IPv4 mask used by the Loghub preprocessing for most datasets.
inline constexpr std::string_view kIpv4Pattern = R"((\d+\.){3}\d+)";

std::vector<PreprocessRule> compile_rules(std::span<const std::string> patterns);

/// Applies each rule globally, in list order.
std::string preprocess(std::string_view content,
                       std::span<const PreprocessRule> rules);

/// Records plus the text each downstream stage sees (content after
/// preprocessing). Records are kept in line_id order.
class RecordStore {
 public:
  RecordStore() = default;
  explicit RecordStore(std::vector<LogRecord> records);
  RecordStore(std::vector<LogRecord> records,
              std::span<const PreprocessRule> rules, std::size_t threads = 1);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::vector<LogRecord>& records() const noexcept { return records_; }
  const LogRecord& record(std::size_t index) const { return records_[index]; }
  std::string_view text(std::size_t index) const { return texts_[index]; }

  /// Position of a line_id, or nullopt if it is not stored.
  std::optional<std::size_t> index_of(std::size_t line_id) const;
  /// Preprocessed text of a line_id. Throws std::out_of_range if absent.
  std::string_view text_of(std::size_t line_id) const;

 private:
  std::vector<LogRecord> records_;
  std::vector<std::string> texts_;
};

struct StructuredOutput {
  struct Row {
    std::size_t line_id = 0;
    std::string content;
    std::string event_id;
    std::string event_template;
  };
  struct TemplateRow {
    std::string event_id;
    std::string event_template;
    std::size_t occurrences = 0;
  };

  std::vector<Row> rows;            // ascending line_id
  std::vector<TemplateRow> templates;  // order of first appearance in rows
};

/// Writes `<dataset>_structured.csv` and `<dataset>_templates.csv` into dir
/// (created if missing). Returns the two paths in that order. Throws
/// std::runtime_error naming the path on failure.
std::pair<std::filesystem::path, std::filesystem::path> write_structured(
    const StructuredOutput& output, const std::filesystem::path& dir,
    std::string_view dataset_name);

void write_rejects(const RejectsReport& rejects,
                   const std::filesystem::path& path);

/// line_id -> EventTemplate read from a Loghub structured CSV. Uses the
/// LineId column when present, otherwise row order (1-based).
struct TemplateColumn {
  std::vector<std::pair<std::size_t, std::string>> entries;  // sorted by id
};

TemplateColumn read_template_column(const std::filesystem::path& path);

}  // namespace loglshd
