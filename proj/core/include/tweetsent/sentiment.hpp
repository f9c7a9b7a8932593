#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tweetsent {

// Codes are fixed: negative=0, neutral=1, positive=2.
enum class Sentiment : std::uint8_t { kNegative = 0, kNeutral = 1, kPositive = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Sentiment, kNumClasses> kAllSentiments = {
    Sentiment::kNegative, Sentiment::kNeutral, Sentiment::kPositive};

constexpr std::size_t code(Sentiment s) { return static_cast<std::size_t>(s); }
Sentiment sentiment_from_code(std::size_t code);

std::string_view to_string(Sentiment s);

// Maps label surface forms to a class: English names and abbreviations
// (case-insensitive) and the Persian words for each class. Surrounding
// whitespace is ignored. Returns nullopt for anything else.
std::optional<Sentiment> parse_sentiment(std::string_view label);

}  // namespace tweetsent
