#include "tweetsent/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tweetsent/error.hpp"
#include "tweetsent/rng.hpp"

namespace tweetsent {

void SvmParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("svm: lambda must be positive");
  if (epochs < 1) throw ConfigError("svm: epochs must be >= 1");
}

LinearBinaryModel::LinearBinaryModel(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DataError("svm: weight vector must include the bias");
}

double LinearBinaryModel::score(const FeatureVector& x) const {
  if (x.dimension() != dimension()) {
    throw DataError("svm: input dimension " + std::to_string(x.dimension()) + " does not match model dimension " +
                    std::to_string(dimension()));
  }
  return x.dot(weights_) + weights_.back();
}

int LinearBinaryModel::predict(const FeatureVector& x) const { return score(x) >= 0.0 ? 1 : -1; }

double svm_objective(const LinearBinaryModel& model, std::span<const FeatureVector> x, std::span<const int> y,
                     double lambda) {
  const auto& w = model.weights();
  const double norm2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) hinge += std::max(0.0, 1.0 - y[i] * model.score(x[i]));
  return 0.5 * lambda * norm2 + (x.empty() ? 0.0 : hinge / static_cast<double>(x.size()));
}

LinearBinaryModel svm_train_binary(std::span<const FeatureVector> x, std::span<const int> y, const SvmParams& params) {
  params.validate();
  if (x.empty()) throw DataError("svm: empty training data");
  if (x.size() != y.size()) throw DataError("svm: vector and label counts differ");
  const std::size_t dim = x.front().dimension();
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].dimension() != dim) throw DataError("svm: inconsistent feature dimensions");
    if (y[i] == 1) {
      has_pos = true;
    } else if (y[i] == -1) {
      has_neg = true;
    } else {
      throw DataError("svm: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw DataError("svm: training data has a single label");

  // w = scale * v, so the shrink step is O(1). The bias is v[dim].
  std::vector<double> v(dim + 1, 0.0);
  double scale = 1.0;
  double v_norm2 = 0.0;
  std::vector<double> x_norm2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x_norm2[i] = x[i].squared_norm() + 1.0;
    if (!std::isfinite(x_norm2[i])) {
      throw NumericError("svm: squared norm of training vector " + std::to_string(i) + " is not finite");
    }
  }
  const double radius2 = 1.0 / params.lambda;

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);
  std::size_t t = 0;

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (params.lambda * static_cast<double>(t));
      const double vx = x[i].dot(v) + v[dim];
      const double margin = y[i] * scale * vx;
      const double shrink = 1.0 - eta * params.lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_norm2 = 0.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double c = eta * y[i] / scale;
        const double v_dot_x = shrink <= 0.0 ? 0.0 : vx;
        x[i].add_scaled_to(v, c);
        v[dim] += c;
        v_norm2 += 2.0 * c * v_dot_x + c * c * x_norm2[i];
      }
      if (params.project) {
        const double w_norm2 = scale * scale * v_norm2;
        if (w_norm2 > radius2) scale *= std::sqrt(radius2 / w_norm2);
      }
      if (scale < 1e-9) {
        for (auto& e : v) e *= scale;
        v_norm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
        scale = 1.0;
      }
    }
  }
  for (auto& e : v) e *= scale;
  LinearBinaryModel model(std::move(v));
  const double objective = svm_objective(model, x, y, params.lambda);
  if (!std::isfinite(objective)) throw NumericError("svm: objective is not finite after training");
  return model;
}

}  // namespace tweetsent
