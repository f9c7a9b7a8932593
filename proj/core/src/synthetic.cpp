#include "tweetsent/synthetic.hpp"

#include <array>

#include "tweetsent/error.hpp"
#include "tweetsent/rng.hpp"

namespace tweetsent {

namespace {

const std::array<std::vector<std::string>, kNumClasses> kKeywords = {{
    // negative
    {"ضرر", "سقوط", "ریزش", "ترس", "وحشت", "کلاهبرداری", "افت", "قرمز", "نزول", "ناامید", "ضعیف", "بازنده",
     "دامپ", "ورشکست", "خطر", "زیان", "نگرانی", "غمگین", "حباب", "فاجعه", "هک", "باخت", "تلخ", "بحران"},
    // neutral
    {"تحلیل", "خبر", "گزارش", "نمودار", "حجم", "معامله", "اطلاعیه", "آپدیت", "سوال", "بررسی", "داده", "آمار",
     "شبکه", "تراکنش", "کارمزد", "صرافی", "توکن", "بلاکچین", "استخراج", "نسخه", "جلسه", "آموزش", "مقاله", "رویداد"},
    // positive
    {"سود", "صعود", "رشد", "عالی", "موفق", "خرید", "امیدوار", "قوی", "برنده", "جهش", "سبز", "رکورد", "محشر",
     "پامپ", "راکت", "خوشحال", "ثروت", "بازده", "شاد", "موفقیت", "پیروزی", "فرصت", "طلایی", "شگفت"},
}};

const std::vector<std::string> kNoise = {
    "بیت‌کوین", "اتریوم", "دوج", "کاردانو", "سولانا", "تتر", "امروز", "فردا", "دیروز", "الان",   "هفته",
    "ساعت",     "دلار",   "رمزارز", "کریپتو", "تریدر", "لحظه", "بازار", "قیمت", "سرمایه", "کوین", "چارت",
    "ارز",      "شب",     "صبح",   "ماه",     "سال",   "گروه", "کانال", "پست",  "رفقا",   "ولت",
};

const std::vector<std::string> kTags = {"bitcoin", "ethereum", "dogecoin", "cardano", "tether"};
const std::vector<std::string> kHashtags = {"#BTC", "#crypto", "#ETH", "#HODL", "#altcoin"};
const std::vector<std::string> kPunct = {"!", "!!", "؟", "،", "...", ".", ":)", "؛"};
const std::vector<std::string> kDigits = {"۱۴۰۲", "100", "۲۵", "3.5", "۹۹٪", "2024"};

std::string arabize(const std::string& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size();) {
    // ی (U+06CC) -> ي (U+064A), ک (U+06A9) -> ك (U+0643)
    if (word.compare(i, 2, "\xDB\x8C") == 0) {
      out += "\xD9\x8A";
      i += 2;
    } else if (word.compare(i, 2, "\xDA\xA9") == 0) {
      out += "\xD9\x83";
      i += 2;
    } else {
      out += word[i++];
    }
  }
  return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
  return pool[rng.uniform_index(pool.size())];
}

}  // namespace

const std::vector<std::string>& synthetic_keywords(Sentiment s) { return kKeywords[code(s)]; }
const std::vector<std::string>& synthetic_noise_tokens() { return kNoise; }

LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.tweets == 0) throw ConfigError("synthetic corpus: tweets must be >= 1");
  if (spec.min_tokens == 0 || spec.min_tokens > spec.max_tokens) {
    throw ConfigError("synthetic corpus: require 1 <= min_tokens <= max_tokens");
  }
  if (spec.noise_fraction < 0.0 || spec.noise_fraction >= 1.0) {
    throw ConfigError("synthetic corpus: noise_fraction must be in [0, 1)");
  }
  if (spec.cross_fraction < 0.0 || spec.cross_fraction >= 0.5) {
    throw ConfigError("synthetic corpus: cross_fraction must be in [0, 0.5)");
  }
  Rng rng(spec.seed);
  std::vector<TweetRecord> records;
  records.reserve(spec.tweets);
  for (std::size_t i = 0; i < spec.tweets; ++i) {
    const Sentiment label = sentiment_from_code(i % kNumClasses);
    const std::size_t length = spec.min_tokens + rng.uniform_index(spec.max_tokens - spec.min_tokens + 1);
    std::vector<std::string> words;
    for (std::size_t k = 0; k < length; ++k) {
      std::string w;
      if (rng.uniform_real() < spec.noise_fraction) {
        w = pick(rng, kNoise);
      } else if (rng.uniform_real() < spec.cross_fraction) {
        const std::size_t other = (code(label) + 1 + rng.uniform_index(kNumClasses - 1)) % kNumClasses;
        w = pick(rng, kKeywords[other]);
      } else {
        w = pick(rng, kKeywords[code(label)]);
      }
      if (spec.surface_noise) {
        if (rng.uniform_real() < 0.08) w += "\u200Cها";
        if (rng.uniform_real() < 0.10) w = arabize(w);
        if (rng.uniform_real() < 0.10) w += pick(rng, kPunct);
      }
      words.push_back(std::move(w));
    }
    if (spec.surface_noise) {
      if (rng.uniform_real() < 0.3) words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(words.size() + 1)), pick(rng, kDigits));
      if (rng.uniform_real() < 0.3) words.push_back(pick(rng, kHashtags));
      if (rng.uniform_real() < 0.1) words.push_back("https://t.co/x" + std::to_string(rng.uniform_index(1000)));
      if (rng.uniform_real() < 0.1) words.insert(words.begin(), "@trader" + std::to_string(rng.uniform_index(100)));
    }
    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    TweetRecord r;
    r.id = static_cast<std::int64_t>(i + 1);
    r.text = std::move(text);
    r.label = label;
    r.tag = pick(rng, kTags);
    records.push_back(std::move(r));
  }
  return LabeledCorpus(std::move(records));
}

}  // namespace tweetsent
