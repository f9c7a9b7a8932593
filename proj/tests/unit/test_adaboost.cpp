#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"
#include "tweetsent/adaboost.hpp"
#include "tweetsent/error.hpp"

using namespace tweetsent;

namespace {

FeatureVector dense(std::initializer_list<double> v) { return DenseVector(v); }

double weighted_error(const Stump& s, std::span<const FeatureVector> x, std::span<const int> y,
                      std::span<const double> w) {
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i) e += s.predict(x[i]) != y[i] ? w[i] : 0.0;
  return e;
}

// Every feature, every midpoint between sorted distinct values, both polarities.
double brute_force_best_error(std::span<const FeatureVector> x, std::span<const int> y, std::span<const double> w,
                              bool& any) {
  double best = 1e300;
  any = false;
  for (std::size_t j = 0; j < x.front().dimension(); ++j) {
    std::set<double> values;
    for (const auto& v : x) values.insert(v.at(j));
    std::vector<double> sorted(values.begin(), values.end());
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
      const double t = 0.5 * (sorted[k] + sorted[k + 1]);
      for (int pol : {1, -1}) {
        best = std::min(best, weighted_error(Stump{static_cast<std::uint32_t>(j), t, pol}, x, y, w));
        any = true;
      }
    }
  }
  return best;
}

std::vector<FeatureVector> random_sparse_rows(Rng& rng, std::size_t n, std::size_t dim) {
  std::vector<FeatureVector> x;
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector s;
    s.dimension = dim;
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (rng.uniform_index(2) == 0) {
        s.indices.push_back(j);
        s.values.push_back(static_cast<double>(static_cast<int>(rng.uniform_index(7)) - 3));
      }
    }
    // Drop explicit zeros so the vector stays canonical.
    SparseVector c;
    c.dimension = dim;
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
      if (s.values[k] != 0.0) {
        c.indices.push_back(s.indices[k]);
        c.values.push_back(s.values[k]);
      }
    }
    x.emplace_back(std::move(c));
  }
  return x;
}

}  // namespace

TEST(Stump, SignOfZeroIsPositive) {
  const Stump s{0, 1.5, 1};
  EXPECT_EQ(s.predict(dense({1.5})), 1);
  EXPECT_EQ(s.predict(dense({1.0})), -1);
  const Stump r{0, 1.5, -1};
  EXPECT_EQ(r.predict(dense({2.0})), -1);
}

TEST(AdaBoost, AlphaFormula) {
  EXPECT_NEAR(stump_alpha(0.2), 0.5 * std::log(4.0), 1e-15);
  EXPECT_NEAR(stump_alpha(0.2), 0.6931, 5e-5);
  EXPECT_NEAR(capped_alpha(), 0.5 * std::log(1e10), 1e-15);
}

TEST(StumpSearch, MatchesBruteForceOracle) {
  Rng rng(13);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(12);
    const std::size_t dim = 1 + rng.uniform_index(4);
    auto x = trial % 2 ? random_sparse_rows(rng, n, dim) : std::vector<FeatureVector>{};
    if (x.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        DenseVector v(dim);
        for (auto& c : v) c = static_cast<double>(rng.uniform_index(5)) * 0.5 - 1.0;
        x.emplace_back(std::move(v));
      }
    }
    std::vector<int> y(n);
    std::vector<double> w(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform_index(2) ? 1 : -1;
      w[i] = rng.uniform_real(0.1, 1.0);
      sum += w[i];
    }
    for (auto& v : w) v /= sum;

    bool any = false;
    const double oracle = brute_force_best_error(x, y, w, any);
    const auto fit = StumpSearch(x).best(y, w);
    ASSERT_EQ(fit.found, any);
    if (!any) continue;
    EXPECT_NEAR(fit.error, oracle, 1e-12);
    EXPECT_NEAR(weighted_error(fit.stump, x, y, w), fit.error, 1e-12);
  }
}

TEST(StumpSearch, TiesPreferLowerFeatureThenThresholdThenPositivePolarity) {
  // Features 0 and 1 are identical, so both give the same best error.
  const std::vector<FeatureVector> x = {dense({0, 0}), dense({1, 1}), dense({2, 2}), dense({3, 3})};
  const std::vector<int> y = {-1, -1, 1, 1};
  const std::vector<double> w(4, 0.25);
  const auto fit = StumpSearch(x).best(y, w);
  EXPECT_EQ(fit.stump, (Stump{0, 1.5, 1}));
  EXPECT_EQ(fit.error, 0.0);

  // (0.5, -1) and (2.5, +1) both reach 0.25; the lower threshold wins.
  const std::vector<FeatureVector> flat = {dense({0}), dense({1}), dense({2}), dense({3})};
  const std::vector<int> alt = {1, -1, -1, 1};
  const auto tie = StumpSearch(flat).best(alt, w);
  EXPECT_EQ(tie.stump, (Stump{0, 0.5, -1}));
  EXPECT_DOUBLE_EQ(tie.error, 0.25);

  // Mirrored labels: (0.5, +1) and (2.5, -1) tie.
  const std::vector<int> mirrored = {-1, 1, 1, -1};
  EXPECT_EQ(StumpSearch(flat).best(mirrored, w).stump, (Stump{0, 0.5, 1}));

  // XOR: both polarities err 0.5 everywhere, so feature 0, threshold 0.5, +1.
  const std::vector<FeatureVector> xor_x = {dense({0, 0}), dense({0, 1}), dense({1, 0}), dense({1, 1})};
  const auto xor_fit = StumpSearch(xor_x).best(std::vector<int>{-1, 1, 1, -1}, w);
  EXPECT_EQ(xor_fit.stump, (Stump{0, 0.5, 1}));
  EXPECT_DOUBLE_EQ(xor_fit.error, 0.5);
}

TEST(AdaBoost, ThresholdSeparableDataIsFitInOneRound) {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const double cut = rng.uniform_real(-5, 5);
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
      const double v = rng.uniform_real(-10, 10);
      x.push_back(dense({v}));
      y.push_back(v > cut ? 1 : -1);
    }
    y[0] = 1;
    x[0] = dense({11});
    y[1] = -1;
    x[1] = dense({-11});
    AdaBoostTrace trace;
    const auto m = adaboost_train_binary(x, y, AdaBoostParams{}, &trace);
    ASSERT_EQ(m.rounds().size(), 1u);
    EXPECT_EQ(m.rounds()[0].alpha, capped_alpha());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(m.predict(x[i]), y[i]);
  }
}

TEST(AdaBoost, ReweightedErrorIsHalfAndBoundDecreases) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 30;
    auto x = random_sparse_rows(rng, n, 5);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.uniform_index(2) ? 1 : -1;
    y[0] = 1;
    y[1] = -1;
    AdaBoostParams p;
    p.rounds = 15;
    AdaBoostTrace trace;
    const auto m = adaboost_train_binary(x, y, p, &trace);
    double bound = 1.0;
    for (std::size_t t = 0; t < trace.errors.size(); ++t) {
      const double e = trace.errors[t];
      EXPECT_LT(e, 0.5);
      if (e == 0.0) break;
      EXPECT_GT(m.rounds()[t].alpha, 0.0);
      const double next = bound * 2.0 * std::sqrt(e * (1.0 - e));
      EXPECT_LT(next, bound);
      bound = next;
    }
    for (double post : trace.post_reweight_errors) EXPECT_NEAR(post, 0.5, 1e-12);

    // The bound dominates the training error.
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) wrong += m.predict(x[i]) != y[i] ? 1 : 0;
    EXPECT_LE(static_cast<double>(wrong) / n, bound + 1e-12);
  }
}

TEST(AdaBoost, StopsWhenNoStumpBeatsChance) {
  // XOR on two binary features: every stump has error exactly 0.5.
  const std::vector<FeatureVector> x = {dense({0, 0}), dense({0, 1}), dense({1, 0}), dense({1, 1})};
  const std::vector<int> y = {-1, 1, 1, -1};
  AdaBoostTrace trace;
  const auto m = adaboost_train_binary(x, y, AdaBoostParams{}, &trace);
  EXPECT_TRUE(m.rounds().empty());
  EXPECT_TRUE(trace.stopped_early);
  EXPECT_EQ(m.score(dense({1, 0})), 0.0);
}

TEST(AdaBoost, ConstantFeaturesGiveEmptyModel) {
  const std::vector<FeatureVector> x(4, dense({2.0, 2.0}));
  const std::vector<int> y = {1, -1, 1, -1};
  const auto m = adaboost_train_binary(x, y, AdaBoostParams{});
  EXPECT_TRUE(m.rounds().empty());
  EXPECT_EQ(m.predict(x[0]), 1);
}

TEST(AdaBoost, Errors) {
  const std::vector<FeatureVector> x = {dense({1}), dense({2})};
  EXPECT_THROW(adaboost_train_binary(x, std::vector<int>{-1, -1}, AdaBoostParams{}), DataError);
  AdaBoostParams p;
  p.rounds = 0;
  EXPECT_THROW(adaboost_train_binary(x, std::vector<int>{1, -1}, p), ConfigError);
  const auto m = adaboost_train_binary(x, std::vector<int>{1, -1}, AdaBoostParams{});
  EXPECT_THROW(m.score(dense({1, 1})), DataError);
}
