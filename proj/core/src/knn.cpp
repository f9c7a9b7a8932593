#include "tweetsent/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tweetsent/error.hpp"

namespace tweetsent {

std::string_view to_string(DistanceMetric m) { return m == DistanceMetric::kCosine ? "cosine" : "euclidean"; }

std::optional<DistanceMetric> parse_distance_metric(std::string_view name) {
  if (name == "cosine") return DistanceMetric::kCosine;
  if (name == "euclidean") return DistanceMetric::kEuclidean;
  return std::nullopt;
}

KnnModel KnnModel::fit(std::vector<FeatureVector> vectors, std::vector<Sentiment> labels, KnnParams params) {
  if (vectors.empty()) throw DataError("knn: empty training data");
  if (vectors.size() != labels.size()) throw DataError("knn: vector and label counts differ");
  if (params.k == 0) throw ConfigError("knn: k must be >= 1");
  if (params.k > vectors.size()) {
    throw ConfigError("knn: k = " + std::to_string(params.k) + " exceeds training size " +
                      std::to_string(vectors.size()));
  }
  KnnModel m;
  m.params_ = params;
  m.dimension_ = vectors.front().dimension();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dimension() != m.dimension_) {
      throw DataError("knn: training vector " + std::to_string(i) + " has dimension " +
                      std::to_string(vectors[i].dimension()) + ", expected " + std::to_string(m.dimension_));
    }
    if (!vectors[i].all_finite()) throw DataError("knn: training vector " + std::to_string(i) + " is not finite");
  }
  m.vectors_ = std::move(vectors);
  m.labels_ = std::move(labels);
  if (params.metric == DistanceMetric::kCosine) {
    m.prepared_.reserve(m.vectors_.size());
    for (const auto& v : m.vectors_) m.prepared_.push_back(v.normalized());
  } else {
    m.squared_norms_.reserve(m.vectors_.size());
    for (const auto& v : m.vectors_) m.squared_norms_.push_back(v.squared_norm());
  }
  return m;
}

double KnnModel::distance(const FeatureVector& q, std::size_t i) const {
  if (params_.metric == DistanceMetric::kCosine) {
    const auto& p = prepared_[i];
    if (q.squared_norm() == 0.0 || p.squared_norm() == 0.0) return 1.0;
    return 1.0 - dot(q, p);
  }
  return std::sqrt(std::max(0.0, squared_distance(q, vectors_[i])));
}

std::vector<KnnModel::Neighbor> KnnModel::neighbors(const FeatureVector& query) const {
  if (query.dimension() != dimension_) {
    throw DataError("knn: query dimension " + std::to_string(query.dimension()) + " does not match model dimension " +
                    std::to_string(dimension_));
  }
  const FeatureVector q = params_.metric == DistanceMetric::kCosine ? query.normalized() : query;
  std::vector<Neighbor> all(vectors_.size());
  for (std::size_t i = 0; i < vectors_.size(); ++i) all[i] = {i, distance(q, i)};
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  };
  const auto k = static_cast<std::ptrdiff_t>(params_.k);
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(params_.k);
  return all;
}

Sentiment KnnModel::vote(const std::vector<Neighbor>& nn) const {
  std::array<std::size_t, kNumClasses> votes{};
  std::array<double, kNumClasses> summed{};
  for (const auto& n : nn) {
    const auto c = code(labels_[n.index]);
    ++votes[c];
    summed[c] += n.distance;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && summed[c] < summed[best])) best = c;
  }
  return sentiment_from_code(best);
}

Sentiment KnnModel::predict(const FeatureVector& query) const { return vote(neighbors(query)); }

std::array<double, kNumClasses> KnnModel::scores(const FeatureVector& query) const {
  std::array<double, kNumClasses> s{};
  for (const auto& n : neighbors(query)) s[code(labels_[n.index])] += 1.0;
  for (auto& x : s) x /= static_cast<double>(params_.k);
  return s;
}

}  // namespace tweetsent
