#include "loglshd/text.hpp"

namespace loglshd::text {
namespace {

// Length of the well-formed sequence starting at bytes[i], or 0 if malformed.
std::size_t valid_sequence_length(std::string_view bytes, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(bytes[i]);
  if (b0 < 0x80) return 1;
  auto cont = [&](std::size_t k, unsigned char lo = 0x80,
                  unsigned char hi = 0xBF) {
    if (i + k >= bytes.size()) return false;
    const auto b = static_cast<unsigned char>(bytes[i + k]);
    return b >= lo && b <= hi;
  };
  if (b0 >= 0xC2 && b0 <= 0xDF) return cont(1) ? 2 : 0;
  if (b0 == 0xE0) return cont(1, 0xA0, 0xBF) && cont(2) ? 3 : 0;
  if ((b0 >= 0xE1 && b0 <= 0xEC) || b0 == 0xEE || b0 == 0xEF)
    return cont(1) && cont(2) ? 3 : 0;
  if (b0 == 0xED) return cont(1, 0x80, 0x9F) && cont(2) ? 3 : 0;
  if (b0 == 0xF0) return cont(1, 0x90, 0xBF) && cont(2) && cont(3) ? 4 : 0;
  if (b0 >= 0xF1 && b0 <= 0xF3) return cont(1) && cont(2) && cont(3) ? 4 : 0;
  if (b0 == 0xF4) return cont(1, 0x80, 0x8F) && cont(2) && cont(3) ? 4 : 0;
  return 0;
}

}  // namespace

SanitizeResult sanitize_utf8(std::string_view bytes) {
  SanitizeResult result;
  std::size_t i = 0;
  // Fast path: all ASCII or all valid.
  while (i < bytes.size()) {
    const std::size_t n = valid_sequence_length(bytes, i);
    if (n == 0) break;
    i += n;
  }
  if (i == bytes.size()) {
    result.text.assign(bytes);
    return result;
  }
  result.text.reserve(bytes.size() + 8);
  result.text.append(bytes.substr(0, i));
  while (i < bytes.size()) {
    const std::size_t n = valid_sequence_length(bytes, i);
    if (n == 0) {
      append_utf8(result.text, kReplacementChar);
      ++result.replaced;
      ++i;
    } else {
      result.text.append(bytes.substr(i, n));
      i += n;
    }
  }
  return result;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const std::size_t n = valid_sequence_length(bytes, i);
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    switch (n) {
      case 1:
        out.push_back(b0);
        break;
      case 2:
        out.push_back(((b0 & 0x1Fu) << 6) | (bytes[i + 1] & 0x3Fu));
        break;
      case 3:
        out.push_back(((b0 & 0x0Fu) << 12) | ((bytes[i + 1] & 0x3Fu) << 6) |
                      (bytes[i + 2] & 0x3Fu));
        break;
      case 4:
        out.push_back(((b0 & 0x07u) << 18) | ((bytes[i + 1] & 0x3Fu) << 12) |
                      ((bytes[i + 2] & 0x3Fu) << 6) | (bytes[i + 3] & 0x3Fu));
        break;
      default:
        out.push_back(kReplacementChar);
        i += 1;
        continue;
    }
    i += n;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) append_utf8(out, c);
  return out;
}

std::size_t count_code_points(std::string_view bytes) noexcept {
  std::size_t n = 0;
  for (unsigned char c : bytes) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace loglshd::text
