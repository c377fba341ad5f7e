#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace loglshd::text {

inline constexpr char32_t kReplacementChar = U'�';

struct SanitizeResult {
  std::string text;
  std::size_t replaced = 0;  // invalid bytes replaced by U+FFFD
};

/// Replaces every byte that is not part of a well-formed UTF-8 sequence with
/// U+FFFD. Valid input is returned unchanged.
SanitizeResult sanitize_utf8(std::string_view bytes);

/// Decodes well-formed UTF-8 (as produced by sanitize_utf8) into code points.
/// Malformed bytes decode to U+FFFD.
std::u32string decode_utf8(std::string_view bytes);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

/// Number of code points in well-formed UTF-8.
std::size_t count_code_points(std::string_view bytes) noexcept;

constexpr bool is_space(char32_t c) noexcept {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\v' || c == U'\f' ||
         c == U'\r';
}

}  // namespace loglshd::text
