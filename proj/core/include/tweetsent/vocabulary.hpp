#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsent/features.hpp"
#include "tweetsent/preprocess.hpp"

namespace tweetsent {

/// Token <-> index bijection over a training corpus. Indices follow the
/// order in which tokens are first seen; only tokens occurring at least
/// `min_count` times are kept.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> frequencies,
             std::vector<std::size_t> document_frequencies, std::size_t num_documents, std::size_t min_count);

  static Vocabulary build(std::span<const Tokens> docs, std::size_t min_count = 1);

  std::optional<std::uint32_t> index_of(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  std::size_t frequency(std::size_t i) const { return frequencies_[i]; }
  std::size_t document_frequency(std::size_t i) const { return document_frequencies_[i]; }

  std::size_t size() const { return tokens_.size(); }
  std::size_t num_documents() const { return num_documents_; }
  std::size_t min_count() const { return min_count_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::size_t>& frequencies() const { return frequencies_; }
  const std::vector<std::size_t>& document_frequencies() const { return document_frequencies_; }

  // CSV `token,index,frequency`.
  std::string to_csv() const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> frequencies_;
  std::vector<std::size_t> document_frequencies_;
  std::size_t num_documents_ = 0;
  std::size_t min_count_ = 1;
  std::unordered_map<std::string, std::uint32_t> index_;
};

enum class BowWeighting { kCount, kBinary, kTfIdf };

std::string_view to_string(BowWeighting w);
std::optional<BowWeighting> parse_bow_weighting(std::string_view name);

// Out-of-vocabulary tokens are ignored. kTfIdf scales counts by the smoothed
// idf ln((1 + N) / (1 + df)) + 1.
SparseVector bow_transform(const Tokens& tokens, const Vocabulary& vocab, BowWeighting weighting = BowWeighting::kCount);

}  // namespace tweetsent
