#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tweetsent/features.hpp"
#include "tweetsent/preprocess.hpp"

namespace tweetsent {

/// Static token -> vector lookup, as read from a pretrained text vector file.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension = 0) : dimension_(dimension) {}

  // Throws DataError on duplicate token or wrong vector length.
  void add(std::string token, DenseVector vector);
  const DenseVector* find(const std::string& token) const;

  std::size_t size() const { return tokens_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::size_t dimension_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, DenseVector> vectors_;
};

// Text vector format: header `count dimension`, then one line per token:
// the token followed by `dimension` space-separated reals.
EmbeddingTable parse_vectors(std::string_view text, std::string_view origin = "<memory>");
EmbeddingTable load_vectors(const std::filesystem::path& path);
std::string format_vectors(const EmbeddingTable& table);
void save_vectors(const EmbeddingTable& table, const std::filesystem::path& path);

struct Embedding {
  DenseVector vector;
  bool missing = false;  // no embedding was available; vector is zero
};

Embedding embed_token(const EmbeddingTable& table, const std::string& token);

// Arithmetic mean of the available token embeddings. Tokens without an
// embedding are skipped; if none remain the result is zero and flagged.
Embedding embed_document(std::size_t dimension, const Tokens& tokens,
                         const std::function<Embedding(const std::string&)>& embed_one);
Embedding embed_document(const EmbeddingTable& table, const Tokens& tokens);

}  // namespace tweetsent
