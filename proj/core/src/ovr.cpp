#include "tweetsent/ovr.hpp"

#include <future>
#include <string>

#include "tweetsent/error.hpp"

namespace tweetsent {

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kKnn:
      return "knn";
    case LearnerKind::kSvm:
      return "svm";
    case LearnerKind::kAdaBoost:
      return "adaboost";
  }
  return "?";
}

std::optional<LearnerKind> parse_learner_kind(std::string_view name) {
  if (name == "knn") return LearnerKind::kKnn;
  if (name == "svm") return LearnerKind::kSvm;
  if (name == "adaboost") return LearnerKind::kAdaBoost;
  return std::nullopt;
}

Sentiment argmax_class(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return sentiment_from_code(best);
}

OvrModel OvrModel::from_knn(KnnModel model) {
  OvrModel m;
  m.kind_ = LearnerKind::kKnn;
  m.dimension_ = model.dimension();
  m.knn_ = std::move(model);
  return m;
}

OvrModel OvrModel::from_svm(std::array<LinearBinaryModel, kNumClasses> scorers) {
  OvrModel m;
  m.kind_ = LearnerKind::kSvm;
  m.dimension_ = scorers[0].dimension();
  for (const auto& s : scorers) {
    if (s.dimension() != m.dimension_) throw DataError("ovr: scorers disagree on feature dimension");
  }
  m.svm_ = std::move(scorers);
  return m;
}

OvrModel OvrModel::from_adaboost(std::array<AdaBoostBinaryModel, kNumClasses> scorers) {
  OvrModel m;
  m.kind_ = LearnerKind::kAdaBoost;
  m.dimension_ = scorers[0].dimension();
  for (const auto& s : scorers) {
    if (s.dimension() != m.dimension_) throw DataError("ovr: scorers disagree on feature dimension");
  }
  m.adaboost_ = std::move(scorers);
  return m;
}

Prediction OvrModel::predict(const FeatureVector& x) const {
  if (x.dimension() != dimension_) {
    throw DataError("ovr: input dimension " + std::to_string(x.dimension()) + " does not match model dimension " +
                    std::to_string(dimension_));
  }
  Prediction p;
  switch (kind_) {
    case LearnerKind::kKnn:
      p.scores = knn_->scores(x);
      p.label = knn_->predict(x);
      return p;
    case LearnerKind::kSvm:
      for (std::size_t c = 0; c < kNumClasses; ++c) p.scores[c] = svm_[c].score(x);
      break;
    case LearnerKind::kAdaBoost:
      for (std::size_t c = 0; c < kNumClasses; ++c) p.scores[c] = adaboost_[c].score(x);
      break;
  }
  p.label = argmax_class(p.scores);
  return p;
}

std::vector<Prediction> OvrModel::predict_all(std::span<const FeatureVector> xs) const {
  std::vector<Prediction> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(predict(x));
  return out;
}

OvrModel ovr_train(LearnerKind kind, const LearnerParams& params, std::span<const FeatureVector> x,
                   std::span<const Sentiment> labels) {
  if (x.size() != labels.size()) throw DataError("ovr: vector and label counts differ");
  if (x.empty()) throw DataError("ovr: empty training data");
  std::array<std::size_t, kNumClasses> counts{};
  for (auto s : labels) ++counts[code(s)];
  std::size_t present = 0;
  for (auto n : counts) present += n > 0 ? 1 : 0;
  if (present < 2) throw DataError("ovr: training data needs at least two classes");

  if (kind == LearnerKind::kKnn) {
    return OvrModel::from_knn(KnnModel::fit(std::vector<FeatureVector>(x.begin(), x.end()),
                                            std::vector<Sentiment>(labels.begin(), labels.end()), params.knn));
  }
  for (auto s : kAllSentiments) {
    if (counts[code(s)] == 0) {
      throw DataError("ovr: class '" + std::string(to_string(s)) + "' is absent from the training data");
    }
  }

  std::array<std::vector<int>, kNumClasses> targets;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    targets[c].reserve(labels.size());
    for (auto s : labels) targets[c].push_back(code(s) == c ? 1 : -1);
  }

  auto run = [&](auto&& train_one) {
    using Result = decltype(train_one(std::size_t{0}));
    std::array<Result, kNumClasses> out;
    if (params.parallel) {
      std::array<std::future<Result>, kNumClasses> jobs;
      for (std::size_t c = 0; c < kNumClasses; ++c) jobs[c] = std::async(std::launch::async, train_one, c);
      for (std::size_t c = 0; c < kNumClasses; ++c) out[c] = jobs[c].get();
    } else {
      for (std::size_t c = 0; c < kNumClasses; ++c) out[c] = train_one(c);
    }
    return out;
  };

  if (kind == LearnerKind::kSvm) {
    return OvrModel::from_svm(run([&](std::size_t c) {
      SvmParams p = params.svm;
      p.seed = params.svm.seed + c;
      return svm_train_binary(x, targets[c], p);
    }));
  }
  return OvrModel::from_adaboost(
      run([&](std::size_t c) { return adaboost_train_binary(x, targets[c], params.adaboost); }));
}

}  // namespace tweetsent
