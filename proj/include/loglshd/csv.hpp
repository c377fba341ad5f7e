#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loglshd::csv {

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Parses RFC 4180 CSV, including quoted fields spanning lines. A UTF-8 BOM
/// is ignored. Throws std::runtime_error on unterminated quotes.
Table parse(std::string_view data);

/// Throws std::runtime_error naming the path if it cannot be read.
Table read_file(const std::filesystem::path& path);

}  // namespace loglshd::csv
