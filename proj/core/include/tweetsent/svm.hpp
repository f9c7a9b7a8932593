#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tweetsent/features.hpp"

namespace tweetsent {

struct SvmParams {
  double lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 42;
  // Project onto the ball of radius 1/sqrt(lambda) after each step.
  bool project = true;

  void validate() const;
};

/// Linear scorer w . [x, 1]. The last weight is the bias.
class LinearBinaryModel {
 public:
  LinearBinaryModel() = default;
  explicit LinearBinaryModel(std::vector<double> weights);

  std::size_t dimension() const { return weights_.empty() ? 0 : weights_.size() - 1; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return weights_.back(); }

  double score(const FeatureVector& x) const;
  // +1 when score >= 0, else -1.
  int predict(const FeatureVector& x) const;

 private:
  std::vector<double> weights_;
};

// lambda/2 * |w|^2 + mean hinge loss max(0, 1 - y * score). The bias is part
// of w and is regularized with it.
double svm_objective(const LinearBinaryModel& model, std::span<const FeatureVector> x, std::span<const int> y,
                     double lambda);

/// Pegasos: each epoch visits the examples in an Rng(seed) shuffled order;
/// step t uses rate 1/(lambda t). Labels are +1/-1. Throws DataError when
/// only one label is present or inputs are inconsistent, NumericError when
/// the objective becomes non-finite.
LinearBinaryModel svm_train_binary(std::span<const FeatureVector> x, std::span<const int> y, const SvmParams& params);

}  // namespace tweetsent
