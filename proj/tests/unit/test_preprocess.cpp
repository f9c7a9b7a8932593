#include <gtest/gtest.h>

#include <algorithm>
#include <thread>

#include "test_support.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/preprocess.hpp"
#include "tweetsent/utf8.hpp"

using namespace tweetsent;
using tweetsent::testing::random_text;
using tweetsent::testing::random_word;

namespace {

const std::string kZwnj = "\u200C";

// Optimal string alignment distance: Levenshtein plus adjacent transposition.
std::size_t osa_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[a.size()][b.size()];
}

std::string spell_oracle(const std::string& token, const std::unordered_map<std::string, std::size_t>& vocab,
                         std::size_t min_freq) {
  if (vocab.count(token)) return token;
  std::vector<std::string> hits;
  for (const auto& [w, f] : vocab) {
    if (f >= min_freq && osa_distance(utf8::decode(token), utf8::decode(w)) == 1) hits.push_back(w);
  }
  return hits.size() == 1 ? hits[0] : token;
}

StopwordList small_stopwords() { return StopwordList::parse("و\nمن\nشد\n"); }

}  // namespace

TEST(StripPunctuation, Examples) {
  EXPECT_EQ(strip_punctuation("سلام!"), "سلام");
  EXPECT_EQ(strip_punctuation("چرا؟!…"), "چرا");
  EXPECT_EQ(strip_punctuation(""), "");
  EXPECT_EQ(strip_punctuation("«خبر»، مهم"), "خبر مهم");
  EXPECT_EQ(strip_punctuation("#بیت_کوین"), "بیت کوین");
}

TEST(StripPunctuation, UrlsAndMentionsRemovedWholesale) {
  EXPECT_EQ(strip_punctuation("ببین https://t.co/abc?x=1 عالی"), "ببین  عالی");
  EXPECT_EQ(strip_punctuation("@trader قیمت"), " قیمت");
  EXPECT_EQ(strip_punctuation("www.example.com"), "");
}

TEST(StripForeign, Examples) {
  EXPECT_EQ(normalize(strip_foreign("bitcoin خرید")), "خرید");
  EXPECT_EQ(strip_foreign("خرید"), "خرید");
  EXPECT_EQ(strip_foreign("BTCو"), "و");
}

TEST(StripDigits, Examples) {
  EXPECT_EQ(strip_digits("۱۰۰ درصد"), " درصد");
  EXPECT_EQ(strip_digits("123"), "");
  EXPECT_EQ(strip_digits("سال1400"), "سال");
  EXPECT_EQ(strip_digits("٣ و ۳"), " و ");
}

TEST(MapCharacters, Examples) {
  const auto map = CharMap::defaults();
  EXPECT_EQ(map_characters("علي", map), "علی");
  EXPECT_EQ(map_characters("كتاب", map), "کتاب");
  EXPECT_EQ(map_characters("کتاب خوب است", map), "کتاب خوب است");
  EXPECT_EQ(map_characters("مـــدرسة", map), "مدرسه");
  EXPECT_EQ(map_characters("كِتَاب", map), "کتاب");
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize("کتاب  ها"), "کتاب" + kZwnj + "ها");
  EXPECT_EQ(normalize("  سلام  دنیا  "), "سلام دنیا");
  EXPECT_EQ(normalize("کتاب" + kZwnj + kZwnj + kZwnj + "ها"), "کتاب" + kZwnj + "ها");
  EXPECT_EQ(normalize("\t\n"), "");
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("سلام دنیا"), (Tokens{"سلام", "دنیا"}));
  EXPECT_EQ(tokenize("کتاب" + kZwnj + "ها"), (Tokens{"کتاب" + kZwnj + "ها"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("  a \t b\n"), (Tokens{"a", "b"}));
}

TEST(RemoveStopwords, Examples) {
  const StopwordList list = StopwordList::parse("من\nرا\n");
  EXPECT_EQ(remove_stopwords({"من", "بیت", "را", "خریدم"}, list), (Tokens{"بیت", "خریدم"}));
  const Tokens t = {"الف", "ب"};
  EXPECT_EQ(remove_stopwords(t, StopwordList{}), t);
  EXPECT_TRUE(remove_stopwords({"من", "را", "من"}, list).empty());
}

TEST(Stopwords, FileFormat) {
  const auto list = StopwordList::parse("# comment\nاز\r\n\n  به  \n");
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(list.contains("از"));
  EXPECT_TRUE(list.contains("به"));
}

TEST(Stopwords, BundledListIsInNormalizedForm) {
  const auto list = StopwordList::defaults();
  const auto map = CharMap::defaults();
  EXPECT_GE(list.size(), 200u);
  for (const auto& w : list.sorted()) {
    EXPECT_EQ(normalize(map_characters(w, map)), w) << w;
    EXPECT_EQ(tokenize(w).size(), 1u) << w;
  }
}

TEST(CorrectSpelling, Examples) {
  const SpellPolicy policy({{"قیمت", 5}, {"بازار", 3}, {"کار", 2}, {"کاد", 2}, {"نادر", 1}}, 2);
  EXPECT_EQ(correct_spelling({"قیمث"}, policy), (Tokens{"قیمت"}));
  EXPECT_EQ(correct_spelling({"بزاار"}, policy), (Tokens{"بازار"}));  // transposition
  EXPECT_EQ(correct_spelling({"کاب"}, policy), (Tokens{"کاب"}));      // two candidates
  EXPECT_EQ(correct_spelling({"قیمت"}, policy), (Tokens{"قیمت"}));
  EXPECT_EQ(correct_spelling({"نادد"}, policy), (Tokens{"نادد"}));    // candidate too rare
  EXPECT_THROW(SpellPolicy({}, 2), ConfigError);
}

TEST(CorrectSpelling, MatchesBruteForceOracle) {
  Rng rng(2024);
  const std::u32string alphabet = U"ابتسک";
  for (int trial = 0; trial < 150; ++trial) {
    std::unordered_map<std::string, std::size_t> vocab;
    const std::size_t n = 1 + rng.uniform_index(12);
    for (std::size_t i = 0; i < n; ++i) vocab[random_word(rng, alphabet, 1, 4)] = 1 + rng.uniform_index(3);
    const std::size_t min_freq = 1 + rng.uniform_index(3);
    const SpellPolicy policy(vocab, min_freq);
    for (int q = 0; q < 20; ++q) {
      const auto token = random_word(rng, alphabet, 1, 5);
      EXPECT_EQ(correct_spelling({token}, policy)[0], spell_oracle(token, vocab, min_freq)) << token;
    }
  }
}

TEST(Stem, Examples) {
  const auto rules = StemRules::defaults();
  EXPECT_EQ(stem_token("کتاب" + kZwnj + "ها", rules), "کتاب");
  EXPECT_EQ(stem_token("سریع" + kZwnj + "تر", rules), "سریع");
  EXPECT_EQ(stem_token("ها", rules), "ها");
  EXPECT_EQ(stem_token("بزرگترین", rules), "بزرگ");
  EXPECT_EQ(stem_token("کتابهایی", rules), "کتاب");
}

TEST(Stem, ExceptionsAndOrdering) {
  StemRules rules = StemRules::defaults();
  ASSERT_EQ(rules.suffixes.front(), "هایی");
  for (std::size_t i = 1; i < rules.suffixes.size(); ++i) {
    EXPECT_GE(utf8::length(rules.suffixes[i - 1]), utf8::length(rules.suffixes[i]));
  }
  rules.exceptions.insert("ایران");
  EXPECT_EQ(stem_token("ایران", rules), "ایران");
  StemRules bad;
  bad.suffixes = {"a b"};
  EXPECT_THROW(bad.canonicalize(), ConfigError);
  bad.suffixes = {"x"};
  bad.min_stem_length = 0;
  EXPECT_THROW(bad.canonicalize(), ConfigError);
}

TEST(Stem, StripsAtMostOneSuffixAndIsIdempotent) {
  const auto rules = StemRules::defaults();
  Rng rng(77);
  const std::u32string alphabet = U"کتابهایرنس\u200C";
  for (int trial = 0; trial < 3000; ++trial) {
    const auto token = random_word(rng, alphabet, 1, 9);
    const auto once = stem_token(token, rules);
    EXPECT_EQ(stem_token(once, rules), once) << token;
    if (once == token) continue;
    // token = once + ZWNJ* + one suffix from the list
    const auto rest = utf8::decode(token).substr(utf8::decode(once).size());
    ASSERT_EQ(token.compare(0, once.size(), once), 0);
    std::u32string suffix = rest;
    while (!suffix.empty() && suffix.front() == utf8::kZwnj) suffix.erase(0, 1);
    EXPECT_NE(std::find(rules.suffixes.begin(), rules.suffixes.end(), utf8::encode(suffix)), rules.suffixes.end())
        << token;
    EXPECT_GE(utf8::length(once), rules.min_stem_length);
  }
}

TEST(CharMapFile, ParsesEscapesAndComments) {
  const auto map = CharMap::parse_tsv("# header\nU+064A\tU+06CC\n\\u0643\t\\u06A9\nة\tه\n\\u0640\t\n");
  ASSERT_EQ(map.entries().size(), 4u);
  EXPECT_EQ(map.apply(std::string("علي كتابة مـن")), "علی کتابه من");
  const auto round = CharMap::parse_tsv(map.to_tsv());
  ASSERT_EQ(round.entries().size(), map.entries().size());
  for (std::size_t i = 0; i < map.entries().size(); ++i) {
    EXPECT_EQ(round.entries()[i].source, map.entries()[i].source);
    EXPECT_EQ(round.entries()[i].replacement, map.entries()[i].replacement);
  }
}

TEST(CharMapFile, Errors) {
  EXPECT_THROW(CharMap::parse_tsv("ي ی\n"), ConfigError);             // no tab
  EXPECT_THROW(CharMap::parse_tsv("ي\tی\nي\tک\n"), ConfigError);      // duplicate
  EXPECT_THROW(CharMap::parse_tsv("a\tb\nb\tc\n"), ConfigError);     // not closed
  EXPECT_THROW(CharMap::parse_tsv("a\tba\n"), ConfigError);          // self-reintroducing
  try {
    CharMap::parse_tsv("# c\nx\ty\nx\tz\n", "rules.tsv");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("rules.tsv: line 3"), std::string::npos) << e.what();
  }
}

TEST(CharacterSteps, IdempotentOnFuzzedText) {
  const auto map = CharMap::defaults();
  const auto rules = StemRules::defaults();
  const auto stop = StopwordList::defaults();
  Rng rng(31337);
  for (int i = 0; i < 4000; ++i) {
    const std::string x = random_text(rng, 60);
    const auto p = strip_punctuation(x);
    EXPECT_EQ(strip_punctuation(p), p) << x;
    const auto f = strip_foreign(x);
    EXPECT_EQ(strip_foreign(f), f);
    const auto d = strip_digits(x);
    EXPECT_EQ(strip_digits(d), d);
    const auto m = map_characters(x, map);
    EXPECT_EQ(map_characters(m, map), m);
    const auto n = normalize(x);
    EXPECT_EQ(normalize(n), n) << x;
    const auto tokens = tokenize(n);
    const auto s = stem(tokens, rules);
    EXPECT_EQ(stem(s, rules), s);
    const auto r = remove_stopwords(tokens, stop);
    EXPECT_EQ(remove_stopwords(r, stop), r);
  }
}

TEST(CharacterSteps, ClosureOnFuzzedText) {
  const auto map = CharMap::defaults();
  Rng rng(99);
  for (int i = 0; i < 4000; ++i) {
    const std::string x = random_text(rng, 60);
    for (char32_t cp : utf8::decode(map_characters(x, map))) EXPECT_FALSE(map.is_source_start(cp));
    for (char32_t cp : utf8::decode(strip_digits(x))) EXPECT_FALSE(is_any_digit(cp));
    for (char32_t cp : utf8::decode(strip_punctuation(x))) EXPECT_FALSE(is_punctuation(cp));
    for (char32_t cp : utf8::decode(strip_foreign(x))) {
      EXPECT_FALSE((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z'));
    }
  }
}

TEST(Tokenize, NoEmptyTokensAndOrderPreserved) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto x = normalize(random_text(rng, 50));
    const auto tokens = tokenize(x);
    std::string joined;
    for (const auto& t : tokens) {
      EXPECT_FALSE(t.empty());
      joined += (joined.empty() ? "" : " ") + t;
    }
    EXPECT_EQ(joined, x);
  }
}

TEST(Pipeline, FixtureTweetComposesStepOracles) {
  PreprocessConfig config;
  config.stopwords = small_stopwords();
  config.spell = SpellPolicy({{"قیمت", 4}, {"دلار", 4}, {"خریدم", 2}}, 2);
  const std::string tweet = "#Bitcoin قيمت ۱۰۰ دلار شد و من خريدم!!";

  std::string s = map_characters(tweet, config.char_map);
  s = strip_punctuation(s);
  s = strip_foreign(s);
  s = strip_digits(s);
  s = normalize(s);
  auto composed = stem(correct_spelling(remove_stopwords(tokenize(s), config.stopwords), *config.spell),
                       config.stem_rules);

  const Tokens expected = {"قیمت", "دلار", "خریدم"};
  EXPECT_EQ(composed, expected);
  EXPECT_EQ(run_pipeline(tweet, config), expected);
}

TEST(Pipeline, SpellingCorrectsTypoAfterCleaning) {
  PreprocessConfig config;
  config.stopwords = small_stopwords();
  config.spell = SpellPolicy({{"قیمت", 4}, {"دلار", 4}}, 2);
  EXPECT_EQ(run_pipeline("قيمث دلارها!", config), (Tokens{"قیمت", "دلار"}));
}

TEST(Pipeline, TokenizeOnlySplitsOnWhitespace) {
  PreprocessConfig config;
  config.steps = {Step::kTokenize};
  EXPECT_EQ(run_pipeline("  قيمت!  ۱۰۰ BTC ", config), (Tokens{"قيمت!", "۱۰۰", "BTC"}));
}

TEST(Pipeline, InvalidOrderingsRejected) {
  PreprocessConfig config;
  config.steps = {Step::kRemoveStopwords, Step::kTokenize};
  EXPECT_THROW(run_pipeline("x", config), ConfigError);
  config.steps = {Step::kTokenize, Step::kNormalize};
  EXPECT_THROW(run_pipeline("x", config), ConfigError);
  config.steps = {Step::kTokenize, Step::kTokenize};
  EXPECT_THROW(run_pipeline("x", config), ConfigError);
  config.steps = {Step::kNormalize};
  EXPECT_THROW(run_pipeline("x", config), ConfigError);
  config.steps = default_steps();
  config.spell.reset();
  EXPECT_THROW(run_pipeline("x", config), ConfigError);
}

TEST(Pipeline, StepNamesRoundTrip) {
  const auto steps = default_steps();
  EXPECT_EQ(parse_steps(format_steps(steps)), steps);
  EXPECT_EQ(format_steps(steps),
            "map_characters,strip_punctuation,strip_foreign,strip_digits,normalize,tokenize,remove_stopwords,"
            "correct_spelling,stem");
  try {
    parse_steps("tokenize,lemmatize");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lemmatize"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("strip_digits"), std::string::npos);
  }
}

TEST(Pipeline, DeterministicAcrossThreads) {
  PreprocessConfig config;
  config.spell = SpellPolicy({{"قیمت", 4}, {"دلار", 4}}, 2);
  Rng rng(8);
  std::vector<std::string> texts;
  for (int i = 0; i < 200; ++i) texts.push_back(random_text(rng, 60));
  std::vector<Tokens> serial;
  for (const auto& t : texts) serial.push_back(run_pipeline(t, config));
  std::vector<Tokens> parallel(texts.size());
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < texts.size(); i += 4) parallel[i] = run_pipeline(texts[i], config);
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(serial, parallel);
}

TEST(Pipeline, RerunOnOutputReproducesTokens) {
  PreprocessConfig config;
  const std::vector<std::string> tweets = {
      "#Bitcoin قيمت ۱۰۰ دلار شد و من خريدم!!",
      "بازار ارزهاي ديجيتال امروز سقوط كرد 😞 @trader",
      "كتاب ها و مقاله هایی درباره بلاکچین https://t.co/x",
      "سریع‌ترین رشد اتریوم در سال 1400؟!",
      "خریدارها نگران‌اند… قیمت‌ها پایین‌تر می‌رود",
      "شبکه‌های اجتماعی «بیت‌کوین» را ترند کردند",
  };
  std::vector<Tokens> first;
  for (const auto& t : tweets) first.push_back(run_pipeline_before(t, config, Step::kCorrectSpelling));
  config.spell = SpellPolicy::from_token_sequences(first, 1);
  for (const auto& t : tweets) {
    const auto once = run_pipeline(t, config);
    std::string joined;
    for (const auto& tok : once) joined += tok + " ";
    EXPECT_EQ(run_pipeline(joined, config), once) << t;
  }
}
