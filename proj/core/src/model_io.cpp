#include "tweetsent/model_io.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>
#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/hash.hpp"

namespace tweetsent {

using nlohmann::json;

std::string_view to_string(VectorizerKind kind) {
  switch (kind) {
    case VectorizerKind::kBow:
      return "bow";
    case VectorizerKind::kSubword:
      return "subword";
    case VectorizerKind::kPretrained:
      return "pretrained";
    case VectorizerKind::kExternal:
      return "external";
  }
  return "?";
}

std::optional<VectorizerKind> parse_vectorizer_kind(std::string_view name) {
  if (name == "bow") return VectorizerKind::kBow;
  if (name == "subword") return VectorizerKind::kSubword;
  if (name == "pretrained") return VectorizerKind::kPretrained;
  if (name == "external") return VectorizerKind::kExternal;
  return std::nullopt;
}

namespace {

json vector_to_json(const FeatureVector& v) {
  if (v.is_sparse()) {
    const auto& s = v.sparse();
    return {{"dim", s.dimension}, {"idx", s.indices}, {"val", s.values}};
  }
  return {{"dense", v.dense()}};
}

FeatureVector vector_from_json(const json& j) {
  if (j.contains("dense")) return FeatureVector(j.at("dense").get<DenseVector>());
  SparseVector s;
  s.dimension = j.at("dim");
  s.indices = j.at("idx").get<std::vector<std::uint32_t>>();
  s.values = j.at("val").get<std::vector<double>>();
  s.check();
  return FeatureVector(std::move(s));
}

json classifier_to_json(const OvrModel& m) {
  json j = {{"kind", std::string(to_string(m.kind()))}, {"dimension", m.dimension()}};
  switch (m.kind()) {
    case LearnerKind::kKnn: {
      const auto& k = m.knn();
      json vectors = json::array();
      for (const auto& v : k.vectors()) vectors.push_back(vector_to_json(v));
      std::vector<std::size_t> labels;
      for (auto s : k.labels()) labels.push_back(code(s));
      j["k"] = k.params().k;
      j["metric"] = std::string(to_string(k.params().metric));
      j["vectors"] = std::move(vectors);
      j["labels"] = labels;
      break;
    }
    case LearnerKind::kSvm: {
      json scorers = json::array();
      for (const auto& s : m.svm()) scorers.push_back(s.weights());
      j["weights"] = std::move(scorers);
      break;
    }
    case LearnerKind::kAdaBoost: {
      json scorers = json::array();
      for (const auto& s : m.adaboost()) {
        json rounds = json::array();
        for (const auto& r : s.rounds()) {
          rounds.push_back({{"feature", r.stump.feature},
                            {"threshold", r.stump.threshold},
                            {"polarity", r.stump.polarity},
                            {"alpha", r.alpha},
                            {"error", r.error}});
        }
        scorers.push_back(std::move(rounds));
      }
      j["rounds"] = std::move(scorers);
      break;
    }
  }
  return j;
}

OvrModel classifier_from_json(const json& j) {
  const auto kind = parse_learner_kind(j.at("kind").get<std::string>());
  if (!kind) throw ModelFormatError("unknown classifier kind");
  const std::size_t dim = j.at("dimension");
  switch (*kind) {
    case LearnerKind::kKnn: {
      KnnParams p;
      p.k = j.at("k");
      p.metric = parse_distance_metric(j.at("metric").get<std::string>()).value_or(DistanceMetric::kCosine);
      std::vector<FeatureVector> vectors;
      for (const auto& v : j.at("vectors")) vectors.push_back(vector_from_json(v));
      std::vector<Sentiment> labels;
      for (std::size_t c : j.at("labels").get<std::vector<std::size_t>>()) labels.push_back(sentiment_from_code(c));
      return OvrModel::from_knn(KnnModel::fit(std::move(vectors), std::move(labels), p));
    }
    case LearnerKind::kSvm: {
      std::array<LinearBinaryModel, kNumClasses> scorers;
      const auto& w = j.at("weights");
      if (w.size() != kNumClasses) throw ModelFormatError("svm model needs three scorers");
      for (std::size_t c = 0; c < kNumClasses; ++c) scorers[c] = LinearBinaryModel(w[c].get<std::vector<double>>());
      return OvrModel::from_svm(std::move(scorers));
    }
    case LearnerKind::kAdaBoost: {
      std::array<AdaBoostBinaryModel, kNumClasses> scorers;
      const auto& all = j.at("rounds");
      if (all.size() != kNumClasses) throw ModelFormatError("adaboost model needs three scorers");
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::vector<BoostRound> rounds;
        for (const auto& r : all[c]) {
          rounds.push_back({Stump{r.at("feature"), r.at("threshold"), r.at("polarity")}, r.at("alpha"), r.at("error")});
        }
        scorers[c] = AdaBoostBinaryModel(dim, std::move(rounds));
      }
      return OvrModel::from_adaboost(std::move(scorers));
    }
  }
  throw ModelFormatError("unknown classifier kind");
}

json preprocess_to_json(const PreprocessConfig& c) {
  json j = {
      {"steps", format_steps(c.steps)},
      {"char_map", c.char_map.to_tsv()},
      {"stopwords", c.stopwords.sorted()},
      {"stem_suffixes", c.stem_rules.suffixes},
      {"stem_min_length", c.stem_rules.min_stem_length},
      {"stem_exceptions", c.stem_rules.exceptions},
  };
  if (c.spell) {
    std::vector<std::pair<std::string, std::size_t>> freq(c.spell->frequencies().begin(),
                                                          c.spell->frequencies().end());
    std::sort(freq.begin(), freq.end());
    j["spell"] = {{"min_frequency", c.spell->min_frequency()}, {"frequencies", freq}};
  }
  return j;
}

PreprocessConfig preprocess_from_json(const json& j) {
  PreprocessConfig c;
  c.steps = parse_steps(j.at("steps").get<std::string>());
  c.char_map = CharMap::parse_tsv(j.at("char_map").get<std::string>(), "model char map");
  const auto words = j.at("stopwords").get<std::vector<std::string>>();
  c.stopwords = StopwordList(std::unordered_set<std::string>(words.begin(), words.end()));
  c.stem_rules.suffixes = j.at("stem_suffixes").get<std::vector<std::string>>();
  c.stem_rules.min_stem_length = j.at("stem_min_length");
  c.stem_rules.exceptions = j.at("stem_exceptions").get<std::set<std::string>>();
  c.stem_rules.canonicalize();
  if (j.contains("spell")) {
    const auto& s = j.at("spell");
    const auto freq = s.at("frequencies").get<std::vector<std::pair<std::string, std::size_t>>>();
    c.spell.emplace(std::unordered_map<std::string, std::size_t>(freq.begin(), freq.end()),
                    s.at("min_frequency").get<std::size_t>());
  }
  c.validate();
  return c;
}

json vectorizer_to_json(const VectorizerState& v) {
  json j = {{"kind", std::string(to_string(v.kind))}, {"dimension", v.dimension}};
  if (v.kind == VectorizerKind::kBow) {
    const auto& voc = v.vocabulary;
    j["weighting"] = std::string(to_string(v.weighting));
    j["tokens"] = voc.tokens();
    j["frequencies"] = voc.frequencies();
    j["document_frequencies"] = voc.document_frequencies();
    j["num_documents"] = voc.num_documents();
    j["min_count"] = voc.min_count();
  }
  if (v.kind == VectorizerKind::kSubword || v.kind == VectorizerKind::kPretrained) {
    j["vectors_file"] = v.vectors_file;
    j["vectors_digest"] = v.vectors_digest;
  }
  return j;
}

VectorizerState vectorizer_from_json(const json& j) {
  VectorizerState v;
  const auto kind = parse_vectorizer_kind(j.at("kind").get<std::string>());
  if (!kind) throw ModelFormatError("unknown vectorizer kind");
  v.kind = *kind;
  v.dimension = j.at("dimension");
  if (v.kind == VectorizerKind::kBow) {
    const auto w = parse_bow_weighting(j.at("weighting").get<std::string>());
    if (!w) throw ModelFormatError("unknown BOW weighting");
    v.weighting = *w;
    v.vocabulary = Vocabulary(j.at("tokens"), j.at("frequencies"), j.at("document_frequencies"),
                              j.at("num_documents"), j.at("min_count"));
  }
  if (j.contains("vectors_file")) {
    v.vectors_file = j.at("vectors_file");
    v.vectors_digest = j.at("vectors_digest");
  }
  return v;
}

}  // namespace

std::string serialize_model(const ModelBundle& b) {
  const json payload = {
      {"name", b.name},
      {"config_hash", b.config_hash},
      {"seed", b.seed},
      {"preprocess", preprocess_to_json(b.preprocess)},
      {"vectorizer", vectorizer_to_json(b.vectorizer)},
      {"classifier", classifier_to_json(b.classifier)},
  };
  const std::string body = payload.dump() + "\n";
  return std::string(kModelMagic) + " " + std::to_string(kModelFormatVersion) + " " + hex64(fnv1a64(body)) + " " +
         std::to_string(body.size()) + "\n" + body;
}

ModelBundle parse_model(std::string_view bytes, std::string_view origin) {
  const std::string where(origin);
  const auto nl = bytes.find('\n');
  std::istringstream head(std::string(bytes.substr(0, nl)));
  std::string magic;
  std::string version;
  std::string checksum;
  std::size_t length = 0;
  head >> magic >> version >> checksum >> length;
  if (magic != kModelMagic) throw ModelFormatError(where + ": not a tweetsent model file");
  if (version != std::to_string(kModelFormatVersion)) {
    throw ModelFormatError(where + ": unsupported model version '" + version + "' (expected " +
                           std::to_string(kModelFormatVersion) + ")");
  }
  if (nl == std::string_view::npos || !head) throw ModelFormatError(where + ": truncated model header");
  const std::string_view body = bytes.substr(nl + 1);
  if (body.size() < length) {
    throw ModelFormatError(where + ": truncated model file (" + std::to_string(body.size()) + " of " +
                           std::to_string(length) + " payload bytes)");
  }
  if (body.size() > length) throw ModelFormatError(where + ": trailing bytes after model payload");
  if (hex64(fnv1a64(body)) != checksum) throw ModelFormatError(where + ": checksum mismatch");

  try {
    const json j = json::parse(body);
    ModelBundle b;
    b.name = j.at("name");
    b.config_hash = j.at("config_hash");
    b.seed = j.at("seed");
    b.preprocess = preprocess_from_json(j.at("preprocess"));
    b.vectorizer = vectorizer_from_json(j.at("vectorizer"));
    b.classifier = classifier_from_json(j.at("classifier"));
    return b;
  } catch (const json::exception& e) {
    throw ModelFormatError(where + ": malformed model payload: " + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  csv::write_text_file(path, serialize_model(bundle));
}

ModelBundle load_model(const std::filesystem::path& path) {
  return parse_model(csv::read_text_file(path), path.string());
}

}  // namespace tweetsent
