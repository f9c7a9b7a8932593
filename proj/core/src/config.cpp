#include "tweetsent/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>
#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/hash.hpp"

namespace tweetsent {

namespace {

constexpr ConfigKey kKeys[] = {
    {"corpus", "", "corpus CSV path (split, freq)"},
    {"text_column", "text", "corpus text column"},
    {"label_column", "label", "corpus label column"},
    {"tag_column", "", "corpus search-term column (optional)"},
    {"id_column", "", "corpus id column (optional; row order otherwise)"},
    {"output_dir", "out", "directory for every output file"},
    {"train_file", "", "training split CSV (default <output_dir>/train.csv)"},
    {"test_file", "", "test split CSV (default <output_dir>/test.csv)"},
    {"model_file", "", "model container (default <output_dir>/model.tsm)"},
    {"input", "", "input CSV for predict"},
    {"predictions_file", "", "predict output (default <output_dir>/predictions.csv)"},
    {"seed", "42", "seed for every stochastic step"},
    {"train_ratio", "0.8", "training share, in (0, 1)"},
    {"stratified", "false", "preserve class proportions in the split"},
    {"steps", "", "preprocessing steps, comma separated (default: all, in standard order)"},
    {"charmap", "", "character map TSV (default: bundled)"},
    {"stopwords", "", "stopword list (default: bundled)"},
    {"stem_suffixes", "", "stem suffixes, comma separated (default: bundled)"},
    {"stem_min_length", "2", "minimum stem length in codepoints"},
    {"stem_exceptions", "", "words never stemmed, comma separated"},
    {"spell_min_freq", "2", "minimum frequency of a spelling target"},
    {"vectorizer", "bow", "bow | subword | pretrained | external"},
    {"bow_min_count", "1", "minimum token count kept in the vocabulary"},
    {"bow_weighting", "count", "count | binary | tfidf"},
    {"subword_dim", "300", "subword embedding dimension"},
    {"subword_min_n", "3", "shortest character n-gram"},
    {"subword_max_n", "6", "longest character n-gram"},
    {"subword_window", "5", "skip-gram window"},
    {"subword_negatives", "5", "negative samples per pair"},
    {"subword_epochs", "5", "skip-gram epochs"},
    {"subword_lr", "0.05", "initial learning rate"},
    {"subword_buckets", "2097152", "n-gram hash buckets"},
    {"subword_min_count", "1", "minimum word count"},
    {"subword_subsample", "0", "frequent-word subsampling threshold (0 disables)"},
    {"subword_compose", "mean", "mean | sum"},
    {"vectors", "", "pretrained word vector file (vectorizer = pretrained)"},
    {"train_vectors", "", "document vectors for the training split (vectorizer = external)"},
    {"test_vectors", "", "document vectors for the test split (vectorizer = external)"},
    {"model", "svm", "knn | svm | adaboost"},
    {"knn_k", "5", "neighbours"},
    {"knn_metric", "auto", "auto | cosine | euclidean (auto: cosine for bow)"},
    {"svm_lambda", "0.0001", "regularization strength"},
    {"svm_epochs", "20", "passes over the data"},
    {"svm_project", "true", "project onto the 1/sqrt(lambda) ball"},
    {"adaboost_rounds", "50", "boosting rounds"},
    {"parallel", "true", "train the three binary problems concurrently"},
    {"top_n", "50", "rows in the term-frequency export (0 = all)"},
    {"lenient", "false", "skip malformed predict rows instead of failing"},
    {"model_name", "", "label used in reports (default <vectorizer>+<model>)"},
};

[[noreturn]] void bad_value(std::string_view key, const std::string& value, std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" + value +
                    "'");
}

template <typename T>
T parse_integer(const ConfigValues& v, std::string_view key) {
  const std::string s = v.get(key);
  T out{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) bad_value(key, s, "a non-negative integer");
  return out;
}

double parse_real(const ConfigValues& v, std::string_view key) {
  const std::string s = v.get(key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) bad_value(key, s, "a number");
  return out;
}

bool parse_flag(const ConfigValues& v, std::string_view key) {
  const std::string s = v.get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad_value(key, s, "true or false");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::filesystem::path path_or(const ConfigValues& v, std::string_view key, const std::filesystem::path& fallback) {
  const std::string s = v.get(key);
  return s.empty() ? fallback : std::filesystem::path(s);
}

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

const ConfigKey* find_config_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void ConfigValues::set(std::string_view key, std::string value) {
  if (!find_config_key(key)) throw ConfigError("unknown config key '" + std::string(key) + "'");
  values_[std::string(key)] = std::move(value);
}

std::string ConfigValues::get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it != values_.end()) return it->second;
  const auto* k = find_config_key(key);
  if (!k) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return std::string(k->default_value);
}

void ConfigValues::merge(const ConfigValues& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

ConfigValues parse_config_text(std::string_view text, std::string_view origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(std::string(origin) + ": config must be a JSON object");
  ConfigValues out;
  for (const auto& [key, value] : j.items()) {
    std::string text_value;
    if (value.is_string()) {
      text_value = value.get<std::string>();
    } else if (value.is_boolean()) {
      text_value = value.get<bool>() ? "true" : "false";
    } else if (value.is_number()) {
      text_value = value.dump();
    } else if (value.is_array() && std::all_of(value.begin(), value.end(), [](const auto& e) { return e.is_string(); })) {
      for (const auto& e : value) {
        if (!text_value.empty()) text_value += ',';
        text_value += e.get<std::string>();
      }
    } else {
      throw ConfigError(std::string(origin) + ": key '" + key + "' must be a string, number, boolean or string list");
    }
    try {
      out.set(key, std::move(text_value));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ": " + e.what());
    }
  }
  return out;
}

ConfigValues load_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, path.string());
}

ExperimentConfig ExperimentConfig::from_values(const ConfigValues& v) {
  ExperimentConfig c;
  c.values = v;
  c.corpus = v.get("corpus");
  c.schema.text_column = v.get("text_column");
  c.schema.label_column = v.get("label_column");
  c.schema.tag_column = v.get("tag_column");
  c.schema.id_column = v.get("id_column");
  c.output_dir = path_or(v, "output_dir", "out");
  c.train_file = path_or(v, "train_file", c.output_dir / "train.csv");
  c.test_file = path_or(v, "test_file", c.output_dir / "test.csv");
  c.model_file = path_or(v, "model_file", c.output_dir / "model.tsm");
  c.input = v.get("input");
  c.predictions_file = path_or(v, "predictions_file", c.output_dir / "predictions.csv");

  c.split.seed = parse_integer<std::uint64_t>(v, "seed");
  c.split.train_ratio = parse_real(v, "train_ratio");
  c.split.stratified = parse_flag(v, "stratified");
  c.split.validate();

  const std::string steps = v.get("steps");
  c.steps = steps.empty() ? default_steps() : parse_steps(steps);
  c.charmap_file = v.get("charmap");
  c.stopwords_file = v.get("stopwords");
  const std::string suffixes = v.get("stem_suffixes");
  c.stem_rules = StemRules::defaults();
  if (!suffixes.empty()) c.stem_rules.suffixes = split_list(suffixes);
  c.stem_rules.min_stem_length = parse_integer<std::size_t>(v, "stem_min_length");
  for (auto& e : split_list(v.get("stem_exceptions"))) c.stem_rules.exceptions.insert(std::move(e));
  c.stem_rules.canonicalize();
  c.spell_min_freq = parse_integer<std::size_t>(v, "spell_min_freq");
  if (c.spell_min_freq < 1) bad_value("spell_min_freq", v.get("spell_min_freq"), "an integer >= 1");

  const std::string vec = v.get("vectorizer");
  const auto vk = parse_vectorizer_kind(vec);
  if (!vk) bad_value("vectorizer", vec, "one of bow, subword, pretrained, external");
  c.vectorizer = *vk;
  c.bow_min_count = parse_integer<std::size_t>(v, "bow_min_count");
  if (c.bow_min_count < 1) bad_value("bow_min_count", v.get("bow_min_count"), "an integer >= 1");
  const auto bw = parse_bow_weighting(v.get("bow_weighting"));
  if (!bw) bad_value("bow_weighting", v.get("bow_weighting"), "one of count, binary, tfidf");
  c.bow_weighting = *bw;

  auto& sw = c.subword;
  sw.dimension = parse_integer<std::size_t>(v, "subword_dim");
  sw.min_n = parse_integer<std::size_t>(v, "subword_min_n");
  sw.max_n = parse_integer<std::size_t>(v, "subword_max_n");
  sw.window = parse_integer<std::size_t>(v, "subword_window");
  sw.negatives = parse_integer<std::size_t>(v, "subword_negatives");
  sw.epochs = parse_integer<std::size_t>(v, "subword_epochs");
  sw.learning_rate = parse_real(v, "subword_lr");
  sw.buckets = parse_integer<std::uint32_t>(v, "subword_buckets");
  sw.min_count = parse_integer<std::size_t>(v, "subword_min_count");
  sw.subsample = parse_real(v, "subword_subsample");
  const auto compose = parse_compose_mode(v.get("subword_compose"));
  if (!compose) bad_value("subword_compose", v.get("subword_compose"), "one of mean, sum");
  sw.compose = *compose;
  sw.seed = c.split.seed;
  sw.validate();

  c.vectors = v.get("vectors");
  c.train_vectors = v.get("train_vectors");
  c.test_vectors = v.get("test_vectors");

  const auto mk = parse_learner_kind(v.get("model"));
  if (!mk) bad_value("model", v.get("model"), "one of knn, svm, adaboost");
  c.model = *mk;
  auto& lp = c.learner;
  lp.knn.k = parse_integer<std::size_t>(v, "knn_k");
  if (lp.knn.k < 1) bad_value("knn_k", v.get("knn_k"), "an integer >= 1");
  const std::string metric = v.get("knn_metric");
  if (metric == "auto") {
    lp.knn.metric = c.vectorizer == VectorizerKind::kBow ? DistanceMetric::kCosine : DistanceMetric::kEuclidean;
  } else if (auto m = parse_distance_metric(metric)) {
    lp.knn.metric = *m;
  } else {
    bad_value("knn_metric", metric, "one of auto, cosine, euclidean");
  }
  lp.svm.lambda = parse_real(v, "svm_lambda");
  lp.svm.epochs = parse_integer<std::size_t>(v, "svm_epochs");
  lp.svm.project = parse_flag(v, "svm_project");
  lp.svm.seed = c.split.seed;
  lp.svm.validate();
  lp.adaboost.rounds = parse_integer<std::size_t>(v, "adaboost_rounds");
  lp.adaboost.validate();
  lp.parallel = parse_flag(v, "parallel");

  c.top_n = parse_integer<std::size_t>(v, "top_n");
  c.lenient = parse_flag(v, "lenient");
  c.model_name = v.get("model_name");
  if (c.model_name.empty()) c.model_name = std::string(to_string(c.vectorizer)) + "+" + std::string(to_string(c.model));
  return c;
}

std::string ExperimentConfig::canonical_text() const {
  std::vector<std::string_view> names;
  for (const auto& k : kKeys) names.push_back(k.name);
  std::sort(names.begin(), names.end());
  std::string out;
  for (auto name : names) {
    out += name;
    out += " = ";
    out += values.get(name);
    out += '\n';
  }
  return out;
}

std::string ExperimentConfig::hash() const {
  std::string material = canonical_text();
  for (const auto& [key, path] : {std::pair{"charmap", charmap_file}, std::pair{"stopwords", stopwords_file}}) {
    if (path.empty()) continue;
    std::string digest;
    try {
      digest = file_digest(path);
    } catch (const DataError& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
    material += std::string("digest ") + key + " = " + digest + "\n";
  }
  return hex64(fnv1a64(material));
}

PreprocessConfig ExperimentConfig::preprocess_rules() const {
  PreprocessConfig p;
  p.steps = steps;
  if (!charmap_file.empty()) p.char_map = CharMap::load(charmap_file);
  if (!stopwords_file.empty()) p.stopwords = StopwordList::load(stopwords_file);
  p.stem_rules = stem_rules;
  return p;
}

}  // namespace tweetsent
