#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsent/embedding.hpp"
#include "tweetsent/vocabulary.hpp"

namespace tweetsent {

enum class ComposeMode { kMean, kSum };

struct SubwordParams {
  std::size_t dimension = 300;
  std::size_t min_n = 3;
  std::size_t max_n = 6;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.05;  // decays linearly to 0 over training
  std::uint64_t seed = 42;
  std::uint32_t buckets = 1u << 21;
  std::size_t min_count = 1;
  double subsample = 0.0;  // 0 disables frequent-word subsampling
  ComposeMode compose = ComposeMode::kMean;

  void validate() const;
};

/// Boundary-marked subword units of `word`. Element 0 is the whole word
/// wrapped as "<word>"; the rest are every codepoint n-gram of the wrapped
/// form with min_n <= n <= max_n, in order of n then position, omitting an
/// n-gram equal to the whole-word entry.
std::vector<std::string> ngram_decompose(std::string_view word, std::size_t min_n, std::size_t max_n);

/// Skip-gram model over words and hashed character n-grams.
///
/// Input rows 0..V-1 belong to vocabulary words; row V + b belongs to hash
/// bucket b = fnv1a32(ngram) mod buckets. Bucket rows are materialized on
/// first write. Every row's initial value is a pure function of (seed, row):
/// components are uniform in [-1/dim, 1/dim) drawn from a SplitMix64 stream
/// seeded with seed ^ (row * 0x9E3779B97F4A7C15). Output rows start at zero.
class SubwordModel {
 public:
  SubwordModel(SubwordParams params, Vocabulary words);

  const SubwordParams& params() const { return params_; }
  const Vocabulary& words() const { return words_; }
  std::size_t dimension() const { return params_.dimension; }

  // Input rows composing `word`: its word row when in vocabulary, then one
  // bucket row per n-gram (repeats kept).
  std::vector<std::uint32_t> input_rows(const std::string& word) const;
  std::uint32_t bucket_row(std::string_view ngram) const;

  void read_input_row(std::uint32_t row, std::span<double> out) const;
  std::span<double> mutable_input_row(std::uint32_t row);
  std::span<const double> output_row(std::uint32_t word) const;
  std::span<double> mutable_output_row(std::uint32_t word);

  // Sum of input rows (the hidden vector used in training).
  DenseVector hidden(std::span<const std::uint32_t> rows) const;

  std::size_t materialized_buckets() const { return bucket_slot_.size(); }

  // Serialization hooks.
  const std::vector<double>& word_input() const { return word_in_; }
  const std::vector<double>& output() const { return out_; }
  std::vector<std::pair<std::uint32_t, std::span<const double>>> bucket_rows() const;
  void restore(std::vector<double> word_in, std::vector<double> out,
               const std::vector<std::pair<std::uint32_t, std::vector<double>>>& buckets);

 private:
  void init_row(std::uint32_t row, std::span<double> out) const;

  SubwordParams params_;
  Vocabulary words_;
  std::vector<double> word_in_;
  std::vector<double> out_;
  std::unordered_map<std::uint32_t, std::size_t> bucket_slot_;  // bucket -> slot
  std::vector<std::uint32_t> slot_bucket_;
  std::vector<double> bucket_in_;
};

/// One positive (center, context) pair with its sampled negatives.
struct PairExample {
  std::uint32_t center = 0;   // vocabulary index
  std::uint32_t context = 0;  // vocabulary index
  std::vector<std::uint32_t> negatives;
};

// Negative-sampling logistic loss:
//   -log s(u_ctx . h) - sum_neg log s(-u_neg . h),  h = sum of center input rows.
double pair_loss(const SubwordModel& model, const PairExample& pair);

struct PairGradient {
  std::map<std::uint32_t, DenseVector> input;   // by input row
  std::map<std::uint32_t, DenseVector> output;  // by output row (vocabulary index)
};

PairGradient pair_gradient(const SubwordModel& model, const PairExample& pair);

struct SkipgramReport {
  double initial_loss = 0.0;  // mean pair loss before any update
  double final_loss = 0.0;    // same evaluation after training
  std::vector<double> epoch_loss;  // running mean of training pair losses per epoch
  std::size_t updates = 0;
};

/// Trains skip-gram with negative sampling. Sequential and deterministic:
/// document order per epoch, window shrinking, subsampling and negatives all
/// come from one Rng(seed). Negatives follow unigram^0.75 and are redrawn
/// when equal to the context word. Throws NumericError on a non-finite loss.
SubwordModel train_skipgram(std::span<const Tokens> docs, const SubwordParams& params,
                            SkipgramReport* report = nullptr);

// Mean pair loss over every (center, context) pair within the full window,
// with negatives drawn from Rng(seed). Used for before/after comparisons.
double mean_corpus_loss(const SubwordModel& model, std::span<const Tokens> docs, std::uint64_t seed);

// Composition of the word's input rows (mean or sum per params.compose).
// Defined for out-of-vocabulary words through their n-grams; flagged missing
// only when the word has no rows at all.
Embedding embed_token(const SubwordModel& model, const std::string& word);
Embedding embed_document(const SubwordModel& model, const Tokens& tokens);

// Vectors of all vocabulary words, in vocabulary order.
EmbeddingTable export_word_vectors(const SubwordModel& model);

void save_subword_model(const SubwordModel& model, const std::filesystem::path& path);
SubwordModel load_subword_model(const std::filesystem::path& path);

std::string_view to_string(ComposeMode mode);
std::optional<ComposeMode> parse_compose_mode(std::string_view name);

}  // namespace tweetsent
