#include "tweetsent/preprocess.hpp"

namespace tweetsent {

namespace detail {
extern const std::string_view kBundledStopwords;
}

CharMap CharMap::defaults() {
  CharMap map;
  map.add(U"ي", U"ی");  // Arabic Yeh -> Farsi Yeh
  map.add(U"ك", U"ک");  // Arabic Kaf -> Keheh
  map.add(U"ة", U"ه");  // Teh Marbuta -> Heh
  map.add(U"ۀ", U"ه");  // Heh with Yeh above -> Heh
  map.add(U"أ", U"ا");  // Alef with Hamza above
  map.add(U"إ", U"ا");  // Alef with Hamza below
  map.add(U"ؤ", U"و");  // Waw with Hamza
  map.add(U"ئ", U"ی");  // Yeh with Hamza
  map.add(U"ٱ", U"ا");  // Alef Wasla
  for (char32_t cp = 0x064B; cp <= 0x065F; ++cp) map.add(std::u32string(1, cp), U"");
  map.add(U"ـ", U"");  // tatweel
  return map;
}

StopwordList StopwordList::defaults() { return parse(detail::kBundledStopwords); }

StemRules StemRules::defaults() {
  StemRules rules;
  rules.suffixes = {"هایی", "های", "ها", "ترین", "تری", "تر", "ات", "ان"};
  rules.min_stem_length = 2;
  rules.canonicalize();
  return rules;
}

}  // namespace tweetsent
