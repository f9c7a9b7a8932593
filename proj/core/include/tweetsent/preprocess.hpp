#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace tweetsent {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Rule tables

/// Ordered codepoint-sequence substitutions. A source appears at most once
/// and no replacement contains any source, so one left-to-right pass
/// (longest source wins at each position) leaves no source behind.
class CharMap {
 public:
  struct Entry {
    std::u32string source;
    std::u32string replacement;
  };

  // Arabic letter variants folded to their Persian forms, Arabic diacritics
  // U+064B..U+065F and tatweel removed.
  static CharMap defaults();
  // `source<TAB>replacement` lines; `#` starts a comment line; escapes
  // \uXXXX, \UXXXXXXXX and U+XXXX are accepted on both sides.
  static CharMap parse_tsv(std::string_view text, std::string_view origin = "<memory>");
  static CharMap load(const std::filesystem::path& path);

  void add(std::u32string source, std::u32string replacement);
  std::string apply(std::string_view text) const;
  std::u32string apply(std::u32string_view text) const;

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_source_start(char32_t cp) const { return by_first_.count(cp) != 0; }
  // Escaped TSV, parseable by parse_tsv.
  std::string to_tsv() const;

 private:
  std::vector<Entry> entries_;
  // first codepoint -> entry indices, longest source first
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
};

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  // Bundled starter list of Persian function words.
  static StopwordList defaults();
  // One token per line, `#` comment lines, blank lines ignored.
  static StopwordList parse(std::string_view text);
  static StopwordList load(const std::filesystem::path& path);

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> words_;
};

struct StemRules {
  std::vector<std::string> suffixes;  // longest first
  std::size_t min_stem_length = 2;    // in codepoints
  std::set<std::string> exceptions;

  // Persian plural, comparative and superlative endings.
  static StemRules defaults();
  // Sorts suffixes longest-first (stable) and validates the table.
  void canonicalize();
};

/// Single-edit spelling correction against a reference vocabulary.
class SpellPolicy {
 public:
  SpellPolicy(std::unordered_map<std::string, std::size_t> frequencies, std::size_t min_frequency = 2);
  static SpellPolicy from_token_sequences(std::span<const Tokens> docs, std::size_t min_frequency = 2);

  bool contains(const std::string& token) const { return frequencies_.count(token) != 0; }
  // The unique vocabulary word with frequency >= min_frequency at
  // Damerau-Levenshtein distance exactly 1, or nullopt when there is none or
  // more than one. Tokens already in the vocabulary have no correction.
  std::optional<std::string> correction(const std::string& token) const;

  std::size_t min_frequency() const { return min_frequency_; }
  const std::unordered_map<std::string, std::size_t>& frequencies() const { return frequencies_; }

 private:
  std::unordered_map<std::string, std::size_t> frequencies_;
  std::size_t min_frequency_;
  std::vector<char32_t> alphabet_;
};

// ---------------------------------------------------------------------------
// Steps

std::string strip_punctuation(std::string_view text);
std::string strip_foreign(std::string_view text);
std::string strip_digits(std::string_view text);
std::string map_characters(std::string_view text, const CharMap& map);
std::string normalize(std::string_view text, std::span<const std::string> join_suffixes);
std::string normalize(std::string_view text);
Tokens tokenize(std::string_view text);
Tokens remove_stopwords(const Tokens& tokens, const StopwordList& list);
Tokens correct_spelling(const Tokens& tokens, const SpellPolicy& policy);
std::string stem_token(const std::string& token, const StemRules& rules);
Tokens stem(const Tokens& tokens, const StemRules& rules);

bool is_punctuation(char32_t cp);
bool is_any_digit(char32_t cp);

// ---------------------------------------------------------------------------
// Pipeline

enum class Step {
  kStripPunctuation,
  kStripForeign,
  kStripDigits,
  kMapCharacters,
  kNormalize,
  kTokenize,
  kRemoveStopwords,
  kCorrectSpelling,
  kStem,
};

std::string_view step_name(Step step);
std::optional<Step> parse_step(std::string_view name);
bool is_character_step(Step step);
// map_characters, strip_punctuation, strip_foreign, strip_digits, normalize,
// tokenize, remove_stopwords, correct_spelling, stem.
std::vector<Step> default_steps();
std::vector<Step> parse_steps(std::string_view comma_separated);
std::string format_steps(std::span<const Step> steps);

struct PreprocessConfig {
  std::vector<Step> steps = default_steps();
  CharMap char_map = CharMap::defaults();
  StopwordList stopwords = StopwordList::defaults();
  StemRules stem_rules = StemRules::defaults();
  // Required when steps include correct_spelling.
  std::optional<SpellPolicy> spell;

  bool has_step(Step step) const;
  // tokenize exactly once, character steps before it, token steps after it.
  void validate() const;
};

// When stopword removal precedes stemming, stems that are stopwords are
// dropped as well.
Tokens run_pipeline(std::string_view text, const PreprocessConfig& config);
// Runs the configured steps that precede the first occurrence of `stop`
// (all steps if absent). Tokenizes at the end if tokenize has not run yet.
Tokens run_pipeline_before(std::string_view text, const PreprocessConfig& config, Step stop);

}  // namespace tweetsent
