#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tweetsent/features.hpp"
#include "tweetsent/sentiment.hpp"

namespace tweetsent {

enum class DistanceMetric { kCosine, kEuclidean };

std::string_view to_string(DistanceMetric m);
std::optional<DistanceMetric> parse_distance_metric(std::string_view name);

struct KnnParams {
  std::size_t k = 5;
  DistanceMetric metric = DistanceMetric::kCosine;
};

/// k-nearest-neighbour classifier. Training data is stored verbatim.
///
/// Cosine distance is 1 - cos(a, b) over L2-normalized vectors; a zero
/// vector is at distance 1 from everything. Neighbours are ordered by
/// (distance, training index). The label with most votes wins; a vote tie
/// goes to the tied class with the smaller summed neighbour distance, then
/// to the smaller class code.
class KnnModel {
 public:
  struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
  };

  // Throws ConfigError for k == 0 or k > training size, DataError for empty
  // data, inconsistent dimensions or mismatched label count.
  static KnnModel fit(std::vector<FeatureVector> vectors, std::vector<Sentiment> labels, KnnParams params);

  std::vector<Neighbor> neighbors(const FeatureVector& query) const;
  Sentiment predict(const FeatureVector& query) const;
  // Vote fraction per class, in class-code order.
  std::array<double, kNumClasses> scores(const FeatureVector& query) const;

  const KnnParams& params() const { return params_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<FeatureVector>& vectors() const { return vectors_; }
  const std::vector<Sentiment>& labels() const { return labels_; }

 private:
  double distance(const FeatureVector& prepared_query, std::size_t i) const;
  Sentiment vote(const std::vector<Neighbor>& nn) const;

  KnnParams params_;
  std::size_t dimension_ = 0;
  std::vector<FeatureVector> vectors_;
  std::vector<Sentiment> labels_;
  std::vector<FeatureVector> prepared_;  // normalized copies for cosine
  std::vector<double> squared_norms_;
};

}  // namespace tweetsent
