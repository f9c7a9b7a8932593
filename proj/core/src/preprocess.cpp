#include "tweetsent/preprocess.hpp"

#include <algorithm>
#include <array>

#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/utf8.hpp"

namespace tweetsent {

namespace {

bool contains_seq(std::u32string_view haystack, std::u32string_view needle) {
  return !needle.empty() && haystack.find(needle) != std::u32string_view::npos;
}

bool is_ascii_letter(char32_t cp) { return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z'); }

char32_t ascii_lower(char32_t cp) { return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp; }

bool matches_ci(std::u32string_view text, std::size_t pos, std::string_view pattern) {
  if (pos + pattern.size() > text.size()) return false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (ascii_lower(text[pos + k]) != static_cast<char32_t>(pattern[k])) return false;
  }
  return true;
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CharMap

void CharMap::add(std::u32string source, std::u32string replacement) {
  if (source.empty()) throw ConfigError("character map: empty source sequence");
  for (const auto& e : entries_) {
    if (e.source == source) throw ConfigError("character map: duplicate source " + utf8::escape(source));
    if (contains_seq(replacement, e.source) || contains_seq(e.replacement, source)) {
      throw ConfigError("character map: replacement would reintroduce a source (" + utf8::escape(source) + ")");
    }
  }
  if (contains_seq(replacement, source)) {
    throw ConfigError("character map: replacement contains its own source " + utf8::escape(source));
  }
  entries_.push_back({std::move(source), std::move(replacement)});
  const std::size_t idx = entries_.size() - 1;
  auto& bucket = by_first_[entries_[idx].source.front()];
  bucket.push_back(idx);
  std::stable_sort(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
    return entries_[a].source.size() > entries_[b].source.size();
  });
}

std::u32string CharMap::apply(std::u32string_view text) const {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    if (auto it = by_first_.find(text[i]); it != by_first_.end()) {
      for (std::size_t idx : it->second) {
        const auto& e = entries_[idx];
        if (text.substr(i, e.source.size()) == e.source) {
          out += e.replacement;
          i += e.source.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(text[i++]);
  }
  return out;
}

std::string CharMap::apply(std::string_view text) const { return utf8::encode(apply(utf8::decode(text))); }

CharMap CharMap::parse_tsv(std::string_view text, std::string_view origin) {
  CharMap map;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim_ascii(line).empty() || trim_ascii(line).front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ": line " + std::to_string(line_no) + ": expected source<TAB>replacement");
    }
    try {
      map.add(utf8::unescape(line.substr(0, tab)), utf8::unescape(line.substr(tab + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  return map;
}

CharMap CharMap::load(const std::filesystem::path& path) {
  return parse_tsv(csv::read_text_file(path), path.string());
}

std::string CharMap::to_tsv() const {
  std::string out;
  for (const auto& e : entries_) {
    out += utf8::escape(e.source);
    out.push_back('\t');
    out += utf8::escape(e.replacement);
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// StopwordList / StemRules

StopwordList StopwordList::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  for_each_line(text, [&](std::string_view line, std::size_t) {
    line = trim_ascii(line);
    if (line.empty() || line.front() == '#') return;
    words.emplace(line);
  });
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path) { return parse(csv::read_text_file(path)); }

std::vector<std::string> StopwordList::sorted() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void StemRules::canonicalize() {
  if (min_stem_length < 1) throw ConfigError("stem rules: minimum stem length must be at least 1");
  for (const auto& s : suffixes) {
    const auto cps = utf8::decode(s);
    if (cps.empty()) throw ConfigError("stem rules: empty suffix");
    for (char32_t cp : cps) {
      if (cp == utf8::kZwnj || utf8::is_whitespace(cp)) {
        throw ConfigError("stem rules: suffix contains whitespace or ZWNJ: " + s);
      }
    }
  }
  std::stable_sort(suffixes.begin(), suffixes.end(),
                   [](const std::string& a, const std::string& b) { return utf8::length(a) > utf8::length(b); });
  suffixes.erase(std::unique(suffixes.begin(), suffixes.end()), suffixes.end());
}

// ---------------------------------------------------------------------------
// SpellPolicy

SpellPolicy::SpellPolicy(std::unordered_map<std::string, std::size_t> frequencies, std::size_t min_frequency)
    : frequencies_(std::move(frequencies)), min_frequency_(min_frequency) {
  if (frequencies_.empty()) throw ConfigError("spelling policy: reference vocabulary is empty");
  std::set<char32_t> letters;
  for (const auto& [word, freq] : frequencies_) {
    if (freq < min_frequency_) continue;
    for (char32_t cp : utf8::decode(word)) letters.insert(cp);
  }
  alphabet_.assign(letters.begin(), letters.end());
}

SpellPolicy SpellPolicy::from_token_sequences(std::span<const Tokens> docs, std::size_t min_frequency) {
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& doc : docs) {
    for (const auto& t : doc) ++freq[t];
  }
  return SpellPolicy(std::move(freq), min_frequency);
}

std::optional<std::string> SpellPolicy::correction(const std::string& token) const {
  if (contains(token)) return std::nullopt;
  const std::u32string word = utf8::decode(token);
  std::set<std::string> found;
  auto consider = [&](const std::u32string& candidate) {
    auto s = utf8::encode(candidate);
    auto it = frequencies_.find(s);
    if (it != frequencies_.end() && it->second >= min_frequency_) found.insert(std::move(s));
    return found.size() > 1;
  };

  const std::size_t n = word.size();
  std::u32string edit;
  for (std::size_t i = 0; i < n; ++i) {
    edit = word;
    edit.erase(i, 1);
    if (consider(edit)) return std::nullopt;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (word[i] == word[i + 1]) continue;
    edit = word;
    std::swap(edit[i], edit[i + 1]);
    if (consider(edit)) return std::nullopt;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (char32_t a : alphabet_) {
      if (a == word[i]) continue;
      edit = word;
      edit[i] = a;
      if (consider(edit)) return std::nullopt;
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {
    for (char32_t a : alphabet_) {
      edit = word;
      edit.insert(edit.begin() + static_cast<std::ptrdiff_t>(i), a);
      if (consider(edit)) return std::nullopt;
    }
  }
  if (found.size() == 1) return *found.begin();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Character-level steps

bool is_punctuation(char32_t cp) {
  switch (cp) {
    case U'#':
    case U'@':
    case U'&':
    case U'*':
    case U'+':
    case U'=':
    case U'<':
    case U'>':
    case U'|':
    case U'~':
    case U'^':
    case U'،':
    case U'؛':
    case U'؟':
    case U'«':
    case U'»':
    case U'…':
      return true;
    default:
      return utf8::is_punctuation_category(cp);
  }
}

bool is_any_digit(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x0660 && cp <= 0x0669) || (cp >= 0x06F0 && cp <= 0x06F9);
}

std::string strip_punctuation(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  const std::size_t n = cps.size();
  std::vector<bool> removed(n, false);

  // URLs and @-mentions go first, up to the next whitespace.
  for (std::size_t i = 0; i < n;) {
    const bool url = matches_ci(cps, i, "http://") || matches_ci(cps, i, "https://") || matches_ci(cps, i, "www.");
    const bool mention = cps[i] == U'@' && i + 1 < n && !utf8::is_whitespace(cps[i + 1]);
    if (url || mention) {
      while (i < n && !utf8::is_whitespace(cps[i])) removed[i++] = true;
      continue;
    }
    if (is_punctuation(cps[i])) removed[i] = true;
    ++i;
  }

  // A removed run inside a word becomes one space; next to whitespace or the
  // text boundary it simply disappears.
  std::u32string out;
  out.reserve(n);
  for (std::size_t i = 0; i < n;) {
    if (!removed[i]) {
      out.push_back(cps[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < n && removed[j]) ++j;
    const bool at_edge = i == 0 || j == n || utf8::is_whitespace(cps[i - 1]) || utf8::is_whitespace(cps[j]);
    if (!at_edge) out.push_back(U' ');
    i = j;
  }
  return utf8::encode(out);
}

std::string strip_foreign(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  std::erase_if(cps, is_ascii_letter);
  return utf8::encode(cps);
}

std::string strip_digits(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  std::erase_if(cps, is_any_digit);
  return utf8::encode(cps);
}

std::string map_characters(std::string_view text, const CharMap& map) { return map.apply(text); }

std::string normalize(std::string_view text, std::span<const std::string> join_suffixes) {
  const std::u32string cps = utf8::decode(text);
  std::vector<std::u32string> suffixes;
  suffixes.reserve(join_suffixes.size());
  for (const auto& s : join_suffixes) suffixes.push_back(utf8::decode(s));
  auto is_suffix = [&](const std::u32string& tok) {
    return std::find(suffixes.begin(), suffixes.end(), tok) != suffixes.end();
  };

  std::vector<std::u32string> words;
  std::u32string current;
  auto flush = [&] {
    // Trim ZWNJ at the token edges; interior runs were already collapsed.
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && current[b] == utf8::kZwnj) ++b;
    while (e > b && current[e - 1] == utf8::kZwnj) --e;
    if (b < e) {
      std::u32string tok = current.substr(b, e - b);
      if (!words.empty() && is_suffix(tok)) {
        words.back().push_back(utf8::kZwnj);
        words.back() += tok;
      } else {
        words.push_back(std::move(tok));
      }
    }
    current.clear();
  };
  for (char32_t cp : cps) {
    if (utf8::is_whitespace(cp)) {
      flush();
    } else if (cp == utf8::kZwnj && !current.empty() && current.back() == utf8::kZwnj) {
      continue;
    } else {
      current.push_back(cp);
    }
  }
  flush();

  std::u32string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(U' ');
    out += words[i];
  }
  return utf8::encode(out);
}

std::string normalize(std::string_view text) {
  static const StemRules rules = StemRules::defaults();
  return normalize(text, rules.suffixes);
}

// ---------------------------------------------------------------------------
// Token-level steps

Tokens tokenize(std::string_view text) {
  Tokens tokens;
  std::u32string current;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_whitespace(cp)) {
      if (!current.empty()) tokens.push_back(utf8::encode(current));
      current.clear();
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) tokens.push_back(utf8::encode(current));
  return tokens;
}

Tokens remove_stopwords(const Tokens& tokens, const StopwordList& list) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!list.contains(t)) out.push_back(t);
  }
  return out;
}

Tokens correct_spelling(const Tokens& tokens, const SpellPolicy& policy) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto fix = policy.correction(t);
    out.push_back(fix ? std::move(*fix) : t);
  }
  return out;
}

namespace {

// Result of stripping the longest matching suffix, or nullopt when no
// suffix matches or the remaining stem would be too short.
std::optional<std::u32string> strip_once(const std::u32string& word, const std::vector<std::u32string>& suffixes,
                                         const StemRules& rules) {
  for (const auto& suffix : suffixes) {
    if (suffix.size() > word.size() ||
        word.compare(word.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    std::u32string base = word.substr(0, word.size() - suffix.size());
    while (!base.empty() && base.back() == utf8::kZwnj) base.pop_back();
    if (base.size() < rules.min_stem_length) return std::nullopt;
    return base;
  }
  return std::nullopt;
}

}  // namespace

std::string stem_token(const std::string& token, const StemRules& rules) {
  if (rules.exceptions.count(token)) return token;
  std::vector<std::u32string> suffixes;
  suffixes.reserve(rules.suffixes.size());
  for (const auto& s : rules.suffixes) suffixes.push_back(utf8::decode(s));

  const std::u32string word = utf8::decode(token);
  auto base = strip_once(word, suffixes, rules);
  if (!base) return token;
  // Only strip when the result is itself stable, so stemming is idempotent
  // while still removing at most one suffix.
  const std::string stemmed = utf8::encode(*base);
  if (!rules.exceptions.count(stemmed) && strip_once(*base, suffixes, rules)) return token;
  return stemmed;
}

Tokens stem(const Tokens& tokens, const StemRules& rules) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(stem_token(t, rules));
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

constexpr std::array<std::pair<Step, std::string_view>, 9> kStepNames = {{
    {Step::kStripPunctuation, "strip_punctuation"},
    {Step::kStripForeign, "strip_foreign"},
    {Step::kStripDigits, "strip_digits"},
    {Step::kMapCharacters, "map_characters"},
    {Step::kNormalize, "normalize"},
    {Step::kTokenize, "tokenize"},
    {Step::kRemoveStopwords, "remove_stopwords"},
    {Step::kCorrectSpelling, "correct_spelling"},
    {Step::kStem, "stem"},
}};

Tokens run_steps(std::string_view text, const PreprocessConfig& config, std::span<const Step> steps) {
  std::string s(text);
  Tokens tokens;
  bool tokenized = false;
  bool stopwords_removed = false;
  for (Step step : steps) {
    switch (step) {
      case Step::kStripPunctuation:
        s = strip_punctuation(s);
        break;
      case Step::kStripForeign:
        s = strip_foreign(s);
        break;
      case Step::kStripDigits:
        s = strip_digits(s);
        break;
      case Step::kMapCharacters:
        s = map_characters(s, config.char_map);
        break;
      case Step::kNormalize:
        s = normalize(s, config.stem_rules.suffixes);
        break;
      case Step::kTokenize:
        tokens = tokenize(s);
        tokenized = true;
        break;
      case Step::kRemoveStopwords:
        tokens = remove_stopwords(tokens, config.stopwords);
        stopwords_removed = true;
        break;
      case Step::kCorrectSpelling:
        tokens = correct_spelling(tokens, *config.spell);
        break;
      case Step::kStem:
        tokens = stem(tokens, config.stem_rules);
        // A stem can itself be a stopword; drop it so a rerun agrees.
        if (stopwords_removed) tokens = remove_stopwords(tokens, config.stopwords);
        break;
    }
  }
  if (!tokenized) tokens = tokenize(s);
  return tokens;
}

}  // namespace

std::string_view step_name(Step step) {
  for (const auto& [s, name] : kStepNames) {
    if (s == step) return name;
  }
  return "unknown";
}

std::optional<Step> parse_step(std::string_view name) {
  for (const auto& [s, n] : kStepNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

bool is_character_step(Step step) {
  return step == Step::kStripPunctuation || step == Step::kStripForeign || step == Step::kStripDigits ||
         step == Step::kMapCharacters || step == Step::kNormalize;
}

std::vector<Step> default_steps() {
  return {Step::kMapCharacters, Step::kStripPunctuation, Step::kStripForeign,
          Step::kStripDigits,   Step::kNormalize,        Step::kTokenize,
          Step::kRemoveStopwords, Step::kCorrectSpelling, Step::kStem};
}

std::vector<Step> parse_steps(std::string_view text) {
  std::vector<Step> steps;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim_ascii(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    auto step = parse_step(item);
    if (!step) {
      std::string valid;
      for (const auto& [s, n] : kStepNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
      throw ConfigError("unknown preprocessing step '" + std::string(item) + "' (valid: " + valid + ")");
    }
    steps.push_back(*step);
  }
  return steps;
}

std::string format_steps(std::span<const Step> steps) {
  std::string out;
  for (Step s : steps) {
    if (!out.empty()) out.push_back(',');
    out += step_name(s);
  }
  return out;
}

bool PreprocessConfig::has_step(Step step) const {
  return std::find(steps.begin(), steps.end(), step) != steps.end();
}

void PreprocessConfig::validate() const {
  const auto n_tokenize = std::count(steps.begin(), steps.end(), Step::kTokenize);
  if (n_tokenize != 1) {
    throw ConfigError("preprocessing steps must contain tokenize exactly once (found " +
                      std::to_string(n_tokenize) + ")");
  }
  bool after = false;
  for (Step s : steps) {
    if (s == Step::kTokenize) {
      after = true;
    } else if (after && is_character_step(s)) {
      throw ConfigError("character-level step '" + std::string(step_name(s)) + "' must come before tokenize");
    } else if (!after && !is_character_step(s)) {
      throw ConfigError("token-level step '" + std::string(step_name(s)) + "' must come after tokenize");
    }
  }
  if (has_step(Step::kCorrectSpelling) && !spell) {
    throw ConfigError("correct_spelling requires a reference vocabulary");
  }
}

Tokens run_pipeline(std::string_view text, const PreprocessConfig& config) {
  config.validate();
  return run_steps(text, config, config.steps);
}

Tokens run_pipeline_before(std::string_view text, const PreprocessConfig& config, Step stop) {
  const auto it = std::find(config.steps.begin(), config.steps.end(), stop);
  const std::vector<Step> prefix(config.steps.begin(), it);
  for (Step s : prefix) {
    if (s == Step::kCorrectSpelling && !config.spell) throw ConfigError("correct_spelling requires a reference vocabulary");
  }
  return run_steps(text, config, prefix);
}

}  // namespace tweetsent
