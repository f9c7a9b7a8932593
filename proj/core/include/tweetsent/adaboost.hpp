#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tweetsent/features.hpp"

namespace tweetsent {

/// Depth-1 decision rule: polarity * sign(x[feature] - threshold), sign(0) = +1.
struct Stump {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  int polarity = 1;

  int predict(const FeatureVector& x) const;
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct StumpFit {
  Stump stump;
  double error = 0.0;
  bool found = false;  // false when no feature takes two distinct values
};

/// Column-major view of a training set, sorted per feature, for repeated
/// weighted stump searches.
class StumpSearch {
 public:
  explicit StumpSearch(std::span<const FeatureVector> x);

  // Minimizes the weighted error over every feature, every midpoint between
  // consecutive distinct values, and both polarities. Ties go to the lower
  // feature index, then the lower threshold, then polarity +1.
  StumpFit best(std::span<const int> y, std::span<const double> weights) const;

  std::size_t dimension() const { return columns_.size(); }

 private:
  struct Entry {
    double value;
    std::uint32_t row;
  };
  std::size_t rows_ = 0;
  std::vector<std::vector<Entry>> columns_;  // nonzero entries sorted by value
};

// 0.5 * ln((1 - error) / error).
double stump_alpha(double error);
// Vote weight used when a stump has zero weighted error: 0.5 * ln(1e10).
double capped_alpha();

struct AdaBoostParams {
  std::size_t rounds = 50;

  void validate() const;
};

struct BoostRound {
  Stump stump;
  double alpha = 0.0;
  double error = 0.0;  // weighted error on the round's distribution
};

struct AdaBoostTrace {
  std::vector<double> errors;                // epsilon per accepted round
  std::vector<double> post_reweight_errors;  // stump error on the updated distribution
  bool stopped_early = false;
};

/// Weighted vote of stumps; score(x) = sum alpha_t h_t(x).
class AdaBoostBinaryModel {
 public:
  AdaBoostBinaryModel() = default;
  AdaBoostBinaryModel(std::size_t dimension, std::vector<BoostRound> rounds);

  std::size_t dimension() const { return dimension_; }
  const std::vector<BoostRound>& rounds() const { return rounds_; }

  double score(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const;  // sign(score), sign(0) = +1

 private:
  std::size_t dimension_ = 0;
  std::vector<BoostRound> rounds_;
};

/// Binary AdaBoost over stumps with labels +1/-1 and uniform initial weights.
/// Stops when the best stump's error reaches 0.5; a zero-error stump is kept
/// with capped_alpha() and ends training. Throws DataError for a single label.
AdaBoostBinaryModel adaboost_train_binary(std::span<const FeatureVector> x, std::span<const int> y,
                                          const AdaBoostParams& params, AdaBoostTrace* trace = nullptr);

}  // namespace tweetsent
