#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tweetsent/corpus.hpp"

namespace tweetsent {

struct SyntheticSpec {
  std::size_t tweets = 600;
  double noise_fraction = 0.2;  // share of tokens drawn from the label-neutral pool
  // Share of the remaining tokens taken from another class's keywords
  // (mixed-sentiment tweets), so the classes overlap.
  double cross_fraction = 0.15;
  std::size_t min_tokens = 4;
  std::size_t max_tokens = 12;
  std::uint64_t seed = 42;
  // Arabic letter variants, digits, Latin hashtags, URLs, punctuation and
  // ZWNJ plurals sprinkled into the raw text.
  bool surface_noise = true;
};

/// Balanced three-class corpus of Persian crypto tweets. Non-noise tokens
/// come mostly from the class's keyword list; each record is tagged with the coin
/// it mentions. Ids run 1..tweets; class of record i is i mod 3.
LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec = {});

const std::vector<std::string>& synthetic_keywords(Sentiment s);
const std::vector<std::string>& synthetic_noise_tokens();

}  // namespace tweetsent
