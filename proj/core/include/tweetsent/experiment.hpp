#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tweetsent/config.hpp"
#include "tweetsent/corpus.hpp"
#include "tweetsent/embedding.hpp"
#include "tweetsent/model_io.hpp"
#include "tweetsent/subword.hpp"

namespace tweetsent {

struct RunSummary {
  std::vector<std::filesystem::path> files;  // outputs written, in write order
  std::vector<std::string> notes;            // human-readable summary lines
};

/// Exclusive claim on an output directory through a lock file created with
/// O_EXCL semantics. Throws ConfigError when another run holds it.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

  static constexpr const char* kFileName = ".tweetsent.lock";

 private:
  std::filesystem::path path_;
};

std::vector<Tokens> preprocess_all(const LabeledCorpus& corpus, const PreprocessConfig& config);

// Rule tables from the config plus a spelling policy fitted on `fit_on`
// when the steps include spelling correction.
PreprocessConfig fit_preprocess(const ExperimentConfig& config, const LabeledCorpus& fit_on);

/// Document vectors supplied by an external system: CSV `id,d0,d1,...`.
struct ExternalVectors {
  std::vector<std::int64_t> ids;
  std::vector<FeatureVector> vectors;
  std::size_t dimension = 0;
};

ExternalVectors load_external_vectors(const std::filesystem::path& path);
// Checks row count and id order against `corpus`; errors name the mismatch.
void check_alignment(const ExternalVectors& vectors, const LabeledCorpus& corpus, const std::filesystem::path& path);

/// Applies a persisted vectorizer to token sequences.
class Featurizer {
 public:
  // `model_path` locates files the vectorizer refers to.
  Featurizer(const VectorizerState& state, const std::filesystem::path& model_path);

  FeatureVector transform(const Tokens& tokens) const;
  std::size_t dimension() const { return state_.dimension; }

 private:
  VectorizerState state_;
  std::optional<SubwordModel> subword_;
  std::optional<EmbeddingTable> table_;
};

RunSummary cmd_split(const ExperimentConfig& config);
RunSummary cmd_train(const ExperimentConfig& config);
RunSummary cmd_evaluate(const ExperimentConfig& config);
RunSummary cmd_predict(const ExperimentConfig& config);
RunSummary cmd_freq(const ExperimentConfig& config);
// Merges metrics JSON reports written by evaluate into comparison.csv.
RunSummary cmd_compare(const ExperimentConfig& config, std::span<const std::filesystem::path> reports);

}  // namespace tweetsent
