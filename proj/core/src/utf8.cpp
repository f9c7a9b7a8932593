#include "tweetsent/utf8.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cctype>
#include <charconv>
#include <cstdint>

namespace tweetsent::utf8 {

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto size = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < size) {
    UChar32 cp = 0;
    U8_NEXT(bytes, i, size, cp);
    out.push_back(cp < 0 ? kReplacement : static_cast<char32_t>(cp));
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
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

std::string encode(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 2);
  for (char32_t cp : codepoints) append(out, cp);
  return out;
}

std::size_t length(std::string_view text) { return decode(text).size(); }

bool is_whitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_punctuation_category(char32_t cp) {
  return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

namespace {

bool parse_hex(std::string_view digits, char32_t& cp) {
  std::uint32_t value = 0;
  const auto* end = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(digits.data(), end, value, 16);
  if (ec != std::errc{} || ptr != end) return false;
  cp = static_cast<char32_t>(value);
  return true;
}

}  // namespace

std::u32string unescape(std::string_view text) {
  std::u32string out;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = 0;
    if (text[i] == '\\' && i + 1 < text.size() && (text[i + 1] == 'u' || text[i + 1] == 'U')) {
      const std::size_t width = text[i + 1] == 'u' ? 4 : 8;
      if (i + 2 + width <= text.size() && parse_hex(text.substr(i + 2, width), cp)) {
        out.push_back(cp);
        i += 2 + width;
        continue;
      }
    }
    if (text[i] == 'U' && i + 1 < text.size() && text[i + 1] == '+') {
      std::size_t j = i + 2;
      while (j < text.size() && j - (i + 2) < 6 && std::isxdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j - (i + 2) >= 4 && parse_hex(text.substr(i + 2, j - i - 2), cp)) {
        out.push_back(cp);
        i = j;
        continue;
      }
    }
    // Plain UTF-8: decode one codepoint.
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
    auto pos = static_cast<std::int32_t>(i);
    UChar32 c = 0;
    U8_NEXT(bytes, pos, static_cast<std::int32_t>(text.size()), c);
    out.push_back(c < 0 ? kReplacement : static_cast<char32_t>(c));
    i = static_cast<std::size_t>(pos);
  }
  return out;
}

std::string escape(std::u32string_view codepoints) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char32_t cp : codepoints) {
    if (cp >= 0x21 && cp < 0x7F && cp != '\\') {
      out.push_back(static_cast<char>(cp));
      continue;
    }
    const int width = cp > 0xFFFF ? 8 : 4;
    out += width == 4 ? "\\u" : "\\U";
    for (int shift = (width - 1) * 4; shift >= 0; shift -= 4) out.push_back(kHex[(cp >> shift) & 0xF]);
  }
  return out;
}

}  // namespace tweetsent::utf8
