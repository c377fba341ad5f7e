#include "loglshd/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/regex.hpp>

#include "loglshd/csv.hpp"
#include "loglshd/parallel.hpp"
#include "loglshd/text.hpp"

namespace loglshd {
namespace {

constexpr std::string_view kRegexMeta = "()?|*+[]{}^$";

bool is_field_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

}  // namespace

LogFormat LogFormat::parse(std::string_view pattern) {
  LogFormat format;
  format.pattern_ = std::string(pattern);
  std::string literal;
  std::set<std::string, std::less<>> seen;
  std::size_t i = 0;
  while (i < pattern.size()) {
    const char c = pattern[i];
    if (c == '\\') {
      if (i + 1 >= pattern.size()) {
        throw std::invalid_argument("log format: dangling backslash");
      }
      literal.push_back(pattern[i + 1]);
      i += 2;
      continue;
    }
    if (c == '<') {
      std::size_t j = i + 1;
      while (j < pattern.size() && is_field_name_char(pattern[j])) ++j;
      if (j < pattern.size() && pattern[j] == '>' && j > i + 1) {
        std::string name(pattern.substr(i + 1, j - i - 1));
        if (!seen.insert(name).second) {
          throw std::invalid_argument("log format: duplicate field <" + name +
                                      ">");
        }
        if (!format.fields_.empty() && literal.empty()) {
          throw std::invalid_argument(
              "log format: fields <" + format.fields_.back() + "> and <" +
              name + "> have no separator between them");
        }
        format.separators_.push_back(std::move(literal));
        literal.clear();
        format.fields_.push_back(std::move(name));
        i = j + 1;
        continue;
      }
    }
    if (kRegexMeta.find(c) != std::string_view::npos) {
      throw std::invalid_argument(
          std::string("log format: unescaped regex character '") + c +
          "' (only <Field> names and literal text are supported)");
    }
    literal.push_back(c);
    ++i;
  }
  format.separators_.push_back(std::move(literal));

  const auto it =
      std::find(format.fields_.begin(), format.fields_.end(), "Content");
  if (it == format.fields_.end()) {
    throw std::invalid_argument("log format: missing <Content> field");
  }
  format.content_index_ =
      static_cast<std::size_t>(std::distance(format.fields_.begin(), it));
  return format;
}

std::optional<std::vector<std::string>> LogFormat::match(
    std::string_view line) const {
  const std::size_t n = fields_.size();
  std::vector<std::string> values(n);

  if (!line.starts_with(separators_.front())) return std::nullopt;
  std::size_t pos = separators_.front().size();
  for (std::size_t k = 0; k < content_index_; ++k) {
    const std::string& next = separators_[k + 1];
    const std::size_t found = line.find(next, pos + 1);
    if (found == std::string_view::npos) return std::nullopt;
    values[k].assign(line.substr(pos, found - pos));
    pos = found + next.size();
  }

  const std::string& suffix = separators_.back();
  if (line.size() < pos + suffix.size() || !line.ends_with(suffix)) {
    return std::nullopt;
  }
  std::size_t end = line.size() - suffix.size();
  for (std::size_t k = n - 1; k > content_index_; --k) {
    const std::string& prev = separators_[k];
    if (end < pos + prev.size() + 2) return std::nullopt;
    const std::size_t found = line.rfind(prev, end - prev.size() - 1);
    if (found == std::string_view::npos || found <= pos) return std::nullopt;
    values[k].assign(line.substr(found + prev.size(), end - found - prev.size()));
    end = found;
  }
  if (end <= pos) return std::nullopt;
  values[content_index_].assign(line.substr(pos, end - pos));
  return values;
}

std::string LogFormat::join(std::span<const std::string> values) const {
  std::string out = separators_.front();
  for (std::size_t k = 0; k < values.size() && k < fields_.size(); ++k) {
    out += values[k];
    out += separators_[k + 1];
  }
  return out;
}

const std::string* LogRecord::header(std::string_view name) const {
  for (const auto& [key, value] : header_values) {
    if (key == name) return &value;
  }
  return nullptr;
}

ParsedLog parse_log_text(std::string_view data, const LogFormat& format,
                         MismatchPolicy policy) {
  ParsedLog parsed;
  std::size_t line_id = 0;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t stop = data.find('\n', start);
    if (stop == std::string_view::npos) stop = data.size();
    std::string_view raw = data.substr(start, stop - start);
    start = stop + 1;
    ++line_id;
    if (raw.ends_with('\r')) raw.remove_suffix(1);

    auto clean = text::sanitize_utf8(raw);
    if (clean.replaced) {
      ++parsed.rejects.invalid_utf8_lines;
      parsed.rejects.replaced_bytes += clean.replaced;
    }
    auto values = format.match(clean.text);
    if (!values) {
      if (policy == MismatchPolicy::WholeLine && !clean.text.empty()) {
        parsed.rejects.passthrough_lines.push_back(line_id);
        parsed.records.push_back(
            LogRecord{line_id, {}, std::move(clean.text)});
      } else {
        parsed.rejects.skipped_lines.push_back(line_id);
      }
      continue;
    }
    LogRecord record;
    record.line_id = line_id;
    const auto& fields = format.fields();
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k == format.content_index()) {
        record.content = std::move((*values)[k]);
      } else {
        record.header_values.emplace_back(fields[k], std::move((*values)[k]));
      }
    }
    parsed.records.push_back(std::move(record));
  }
  return parsed;
}

ParsedLog parse_log_file(const std::filesystem::path& path,
                         const LogFormat& format, MismatchPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read log file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading " + path.string());
  return parse_log_text(buffer.str(), format, policy);
}

struct PreprocessRule::Compiled {
  boost::regex regex;
};

PreprocessRule::PreprocessRule(std::string pattern)
    : pattern_(std::move(pattern)) {
  try {
    compiled_ = std::make_shared<const Compiled>(
        Compiled{boost::regex(pattern_, boost::regex::perl)});
  } catch (const boost::regex_error& e) {
    throw std::invalid_argument("invalid preprocessing regex '" + pattern_ +
                                "': " + e.what());
  }
}

std::string PreprocessRule::apply(std::string_view content) const {
  std::string out;
  out.reserve(content.size());
  boost::regex_replace(std::back_inserter(out), content.begin(), content.end(),
                       compiled_->regex, std::string(kPlaceholder),
                       boost::regex_constants::format_literal);
  return out;
}

std::vector<PreprocessRule> compile_rules(
    std::span<const std::string> patterns) {
  std::vector<PreprocessRule> rules;
  rules.reserve(patterns.size());
  for (const auto& p : patterns) rules.emplace_back(p);
  return rules;
}

std::string preprocess(std::string_view content,
                       std::span<const PreprocessRule> rules) {
  std::string current(content);
  for (const auto& rule : rules) current = rule.apply(current);
  return current;
}

RecordStore::RecordStore(std::vector<LogRecord> records)
    : RecordStore(std::move(records), {}, 1) {}

RecordStore::RecordStore(std::vector<LogRecord> records,
                         std::span<const PreprocessRule> rules,
                         std::size_t threads)
    : records_(std::move(records)) {
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].line_id <= records_[i - 1].line_id) {
      throw std::invalid_argument("record store: line ids must increase");
    }
  }
  texts_.resize(records_.size());
  parallel_for(records_.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      texts_[i] = rules.empty() ? records_[i].content
                                : preprocess(records_[i].content, rules);
    }
  });
}

std::optional<std::size_t> RecordStore::index_of(std::size_t line_id) const {
  const auto it = std::lower_bound(
      records_.begin(), records_.end(), line_id,
      [](const LogRecord& r, std::size_t id) { return r.line_id < id; });
  if (it == records_.end() || it->line_id != line_id) return std::nullopt;
  return static_cast<std::size_t>(it - records_.begin());
}

std::string_view RecordStore::text_of(std::size_t line_id) const {
  const auto index = index_of(line_id);
  if (!index) {
    throw std::out_of_range("no record with line id " +
                            std::to_string(line_id));
  }
  return texts_[*index];
}

namespace {

void check_stream(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::pair<std::filesystem::path, std::filesystem::path> write_structured(
    const StructuredOutput& output, const std::filesystem::path& dir,
    std::string_view dataset_name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }
  const std::string name(dataset_name);
  auto structured_path = dir / (name + "_structured.csv");
  auto templates_path = dir / (name + "_templates.csv");

  {
    std::ofstream out(structured_path, std::ios::binary | std::ios::trunc);
    check_stream(out, structured_path);
    std::string buffer = "LineId,Content,EventId,EventTemplate\n";
    for (const auto& row : output.rows) {
      buffer += std::to_string(row.line_id);
      buffer += ',';
      buffer += csv::escape(row.content);
      buffer += ',';
      buffer += csv::escape(row.event_id);
      buffer += ',';
      buffer += csv::escape(row.event_template);
      buffer += '\n';
      if (buffer.size() > (1u << 20)) {
        out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        buffer.clear();
      }
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    out.flush();
    check_stream(out, structured_path);
  }
  {
    std::ofstream out(templates_path, std::ios::binary | std::ios::trunc);
    check_stream(out, templates_path);
    out << "EventId,EventTemplate,Occurrences\n";
    for (const auto& t : output.templates) {
      csv::write_row(out, {t.event_id, t.event_template,
                           std::to_string(t.occurrences)});
    }
    out.flush();
    check_stream(out, templates_path);
  }
  return {structured_path, templates_path};
}

void write_rejects(const RejectsReport& rejects,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check_stream(out, path);
  out << "# skipped lines: " << rejects.skipped_lines.size() << '\n';
  out << "# whole-line passthrough: " << rejects.passthrough_lines.size()
      << '\n';
  out << "# lines with invalid UTF-8: " << rejects.invalid_utf8_lines
      << " (bytes replaced: " << rejects.replaced_bytes << ")\n";
  for (std::size_t id : rejects.skipped_lines) out << id << '\n';
  out.flush();
  check_stream(out, path);
}

TemplateColumn read_template_column(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  const auto template_col = table.column("EventTemplate");
  if (!template_col) {
    throw std::runtime_error(path.string() + ": no EventTemplate column");
  }
  const auto id_col = table.column("LineId");
  TemplateColumn column;
  column.entries.reserve(table.rows.size());
  std::size_t ordinal = 0;
  for (const auto& row : table.rows) {
    ++ordinal;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= *template_col || (id_col && row.size() <= *id_col)) {
      throw std::runtime_error(path.string() + ": short row " +
                               std::to_string(ordinal));
    }
    std::size_t id = ordinal;
    if (id_col) {
      try {
        id = std::stoull(row[*id_col]);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ": bad LineId '" +
                                 row[*id_col] + "'");
      }
    }
    column.entries.emplace_back(id, row[*template_col]);
  }
  std::sort(column.entries.begin(), column.entries.end());
  for (std::size_t i = 1; i < column.entries.size(); ++i) {
    if (column.entries[i].first == column.entries[i - 1].first) {
      throw std::runtime_error(path.string() + ": duplicate LineId " +
                               std::to_string(column.entries[i].first));
    }
  }
  return column;
}

}  // namespace loglshd
