#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tweetsent/corpus.hpp"
#include "tweetsent/model_io.hpp"
#include "tweetsent/ovr.hpp"
#include "tweetsent/preprocess.hpp"
#include "tweetsent/subword.hpp"

namespace tweetsent {

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

// Every recognized key, in documentation order.
std::span<const ConfigKey> config_keys();
const ConfigKey* find_config_key(std::string_view name);

/// Raw key -> value text. Unknown keys are rejected on insertion.
class ConfigValues {
 public:
  void set(std::string_view key, std::string value);
  // Value, or the key's default when unset.
  std::string get(std::string_view key) const;
  bool is_set(std::string_view key) const { return values_.count(std::string(key)) != 0; }
  const std::map<std::string, std::string>& explicit_values() const { return values_; }
  // Copies every value of `other` over this one.
  void merge(const ConfigValues& other);

 private:
  std::map<std::string, std::string> values_;
};

// A flat JSON object; `//` and `/* */` comments are allowed. Values may be
// strings, numbers or booleans; a list of strings is joined with commas.
ConfigValues parse_config_text(std::string_view text, std::string_view origin = "<memory>");
ConfigValues load_config_file(const std::filesystem::path& path);

/// Typed, validated view of a ConfigValues.
struct ExperimentConfig {
  ConfigValues values;

  std::filesystem::path corpus;
  CsvSchema schema;
  std::filesystem::path output_dir;
  std::filesystem::path train_file;
  std::filesystem::path test_file;
  std::filesystem::path model_file;
  std::filesystem::path input;
  std::filesystem::path predictions_file;

  SplitSpec split;

  std::vector<Step> steps;
  std::filesystem::path charmap_file;
  std::filesystem::path stopwords_file;
  StemRules stem_rules;
  std::size_t spell_min_freq = 2;

  VectorizerKind vectorizer = VectorizerKind::kBow;
  std::size_t bow_min_count = 1;
  BowWeighting bow_weighting = BowWeighting::kCount;
  SubwordParams subword;
  std::filesystem::path vectors;
  std::filesystem::path train_vectors;
  std::filesystem::path test_vectors;

  LearnerKind model = LearnerKind::kSvm;
  LearnerParams learner;

  std::size_t top_n = 50;
  bool lenient = false;
  std::string model_name;

  // Throws ConfigError naming the key and, for enumerations, the valid options.
  static ExperimentConfig from_values(const ConfigValues& values);

  // Sorted `key = value` lines over every key, defaults included.
  std::string canonical_text() const;
  // fnv1a64 of canonical_text() plus the digests of referenced rule files.
  std::string hash() const;
  // Rule tables from the configured files or the bundled defaults. The
  // spelling policy is left empty; it is fitted on training data.
  PreprocessConfig preprocess_rules() const;
};

}  // namespace tweetsent
