#include "tweetsent/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>

#include "tweetsent/error.hpp"

namespace tweetsent {

Sentiment sentiment_from_code(std::size_t c) {
  if (c >= kNumClasses) throw DataError("invalid sentiment code " + std::to_string(c));
  return static_cast<Sentiment>(c);
}

std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::kNegative:
      return "negative";
    case Sentiment::kNeutral:
      return "neutral";
    case Sentiment::kPositive:
      return "positive";
  }
  return "negative";
}

namespace {

constexpr std::pair<std::string_view, Sentiment> kAliases[] = {
    {"negative", Sentiment::kNegative},
    {"neg", Sentiment::kNegative},
    {"منفی", Sentiment::kNegative},
    {"neutral", Sentiment::kNeutral},
    {"neu", Sentiment::kNeutral},
    {"خنثی", Sentiment::kNeutral},
    {"بی‌طرف", Sentiment::kNeutral},
    {"positive", Sentiment::kPositive},
    {"pos", Sentiment::kPositive},
    {"مثبت", Sentiment::kPositive},
};

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Sentiment> parse_sentiment(std::string_view label) {
  std::string key(trim(label));
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  for (const auto& [alias, s] : kAliases) {
    if (key == alias) return s;
  }
  return std::nullopt;
}

}  // namespace tweetsent
