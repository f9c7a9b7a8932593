#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tweetsent/ovr.hpp"
#include "tweetsent/preprocess.hpp"
#include "tweetsent/vocabulary.hpp"

namespace tweetsent {

enum class VectorizerKind { kBow, kSubword, kPretrained, kExternal };

std::string_view to_string(VectorizerKind kind);
std::optional<VectorizerKind> parse_vectorizer_kind(std::string_view name);

/// Fitted feature extraction state. BOW keeps its vocabulary inline; the
/// embedding kinds refer to a vector file by path and content digest.
/// External document vectors need no state beyond the dimension.
struct VectorizerState {
  VectorizerKind kind = VectorizerKind::kBow;
  Vocabulary vocabulary;
  BowWeighting weighting = BowWeighting::kCount;
  std::string vectors_file;    // subword: relative to the model file
  std::string vectors_digest;  // hex fnv1a64
  std::size_t dimension = 0;
};

/// Everything `predict` needs: preprocessing rules, vectorizer and classifier.
struct ModelBundle {
  std::string name;
  std::string config_hash;
  std::uint64_t seed = 0;
  PreprocessConfig preprocess;
  VectorizerState vectorizer;
  OvrModel classifier;
};

inline constexpr std::string_view kModelMagic = "tweetsent-model";
inline constexpr int kModelFormatVersion = 1;

/// Container: one line `tweetsent-model <version> <fnv1a64 hex> <bytes>`
/// followed by a JSON payload of exactly <bytes> bytes.
std::string serialize_model(const ModelBundle& bundle);
// Throws ModelFormatError on a foreign file, unknown version, truncation or
// checksum mismatch.
ModelBundle parse_model(std::string_view bytes, std::string_view origin = "<memory>");

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace tweetsent
