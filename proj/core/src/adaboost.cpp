#include "tweetsent/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tweetsent/error.hpp"

namespace tweetsent {

int Stump::predict(const FeatureVector& x) const { return x.at(feature) - threshold >= 0.0 ? polarity : -polarity; }

double stump_alpha(double error) { return 0.5 * std::log((1.0 - error) / error); }

double capped_alpha() { return 0.5 * std::log(1e10); }

void AdaBoostParams::validate() const {
  if (rounds < 1) throw ConfigError("adaboost: rounds must be >= 1");
}

StumpSearch::StumpSearch(std::span<const FeatureVector> x) : rows_(x.size()) {
  const std::size_t dim = x.empty() ? 0 : x.front().dimension();
  columns_.resize(dim);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].dimension() != dim) throw DataError("adaboost: inconsistent feature dimensions");
    x[i].for_each_nonzero([&](std::size_t j, double v) {
      columns_[j].push_back({v, static_cast<std::uint32_t>(i)});
    });
  }
  for (auto& col : columns_) {
    std::stable_sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
  }
}

StumpFit StumpSearch::best(std::span<const int> y, std::span<const double> weights) const {
  double total_pos = 0.0;
  double total_neg = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) (y[i] > 0 ? total_pos : total_neg) += weights[i];
  const double total = total_pos + total_neg;

  StumpFit best;
  struct Group {
    double value;
    double pos;
    double neg;
  };
  std::vector<Group> groups;

  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& col = columns_[j];
    // Group equal values; rows absent from the column hold 0.
    groups.clear();
    double nz_pos = 0.0;
    double nz_neg = 0.0;
    for (const auto& e : col) {
      const double w = weights[e.row];
      if (groups.empty() || groups.back().value != e.value) groups.push_back({e.value, 0.0, 0.0});
      (y[e.row] > 0 ? groups.back().pos : groups.back().neg) += w;
      (y[e.row] > 0 ? nz_pos : nz_neg) += w;
    }
    if (col.size() < rows_) {
      const Group zero{0.0, total_pos - nz_pos, total_neg - nz_neg};
      auto at = std::lower_bound(groups.begin(), groups.end(), 0.0,
                                 [](const Group& g, double v) { return g.value < v; });
      groups.insert(at, zero);
    }
    // Sweep: after group g, everything up to g falls below the threshold.
    double left_pos = 0.0;
    double left_neg = 0.0;
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      left_pos += groups[g].pos;
      left_neg += groups[g].neg;
      double threshold = 0.5 * (groups[g].value + groups[g + 1].value);
      if (!(threshold > groups[g].value)) threshold = groups[g + 1].value;
      // Polarity +1 predicts +1 above the threshold and -1 below it.
      const double err_plus = left_pos + (total_neg - left_neg);
      const double err_minus = total - err_plus;
      if (!best.found || err_plus < best.error) {
        best = {Stump{static_cast<std::uint32_t>(j), threshold, 1}, err_plus, true};
      }
      if (err_minus < best.error) best = {Stump{static_cast<std::uint32_t>(j), threshold, -1}, err_minus, true};
    }
  }
  return best;
}

AdaBoostBinaryModel::AdaBoostBinaryModel(std::size_t dimension, std::vector<BoostRound> rounds)
    : dimension_(dimension), rounds_(std::move(rounds)) {
  for (const auto& r : rounds_) {
    if (r.stump.feature >= dimension_ || (r.stump.polarity != 1 && r.stump.polarity != -1)) {
      throw DataError("adaboost: malformed stump");
    }
  }
}

double AdaBoostBinaryModel::score(const FeatureVector& x) const {
  if (x.dimension() != dimension_) {
    throw DataError("adaboost: input dimension " + std::to_string(x.dimension()) +
                    " does not match model dimension " + std::to_string(dimension_));
  }
  double s = 0.0;
  for (const auto& r : rounds_) s += r.alpha * r.stump.predict(x);
  return s;
}

int AdaBoostBinaryModel::predict(const FeatureVector& x) const { return score(x) >= 0.0 ? 1 : -1; }

AdaBoostBinaryModel adaboost_train_binary(std::span<const FeatureVector> x, std::span<const int> y,
                                          const AdaBoostParams& params, AdaBoostTrace* trace) {
  params.validate();
  if (x.empty()) throw DataError("adaboost: empty training data");
  if (x.size() != y.size()) throw DataError("adaboost: vector and label counts differ");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw DataError("adaboost: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw DataError("adaboost: training data has a single label");

  const StumpSearch search(x);
  const std::size_t n = x.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<int> h(n);
  std::vector<BoostRound> rounds;
  AdaBoostTrace local;

  for (std::size_t t = 0; t < params.rounds; ++t) {
    const StumpFit fit = search.best(y, w);
    if (!fit.found || fit.error >= 0.5) {
      local.stopped_early = true;
      break;
    }
    // Errors are sums of weights; a perfect stump can leave rounding residue.
    const double eps = fit.error <= 1e-12 ? 0.0 : fit.error;
    if (eps == 0.0) {
      rounds.push_back({fit.stump, capped_alpha(), 0.0});
      local.errors.push_back(0.0);
      local.stopped_early = t + 1 < params.rounds;
      break;
    }
    const double alpha = stump_alpha(eps);
    rounds.push_back({fit.stump, alpha, eps});
    local.errors.push_back(eps);

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = fit.stump.predict(x[i]);
      w[i] *= std::exp(-alpha * y[i] * h[i]);
      sum += w[i];
    }
    double post = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= sum;
      if (h[i] != y[i]) post += w[i];
    }
    local.post_reweight_errors.push_back(post);
  }
  if (trace) *trace = std::move(local);
  return AdaBoostBinaryModel(x.front().dimension(), std::move(rounds));
}

}  // namespace tweetsent
