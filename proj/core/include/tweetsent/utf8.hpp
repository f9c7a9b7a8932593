#pragma once

#include <string>
#include <string_view>

namespace tweetsent::utf8 {

inline constexpr char32_t kZwnj = U'‌';
inline constexpr char32_t kReplacement = U'�';

// Ill-formed sequences decode to U+FFFD, one per maximal invalid subpart.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view codepoints);
void append(std::string& out, char32_t cp);

std::size_t length(std::string_view text);

bool is_whitespace(char32_t cp);
// Unicode general category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation_category(char32_t cp);

// Parses "\uXXXX", "\UXXXXXXXX" and "U+XXXX" escapes; other text passes through.
std::u32string unescape(std::string_view text);
// Escapes every non-printable-ASCII codepoint as \uXXXX or \UXXXXXXXX.
std::string escape(std::u32string_view codepoints);

}  // namespace tweetsent::utf8
