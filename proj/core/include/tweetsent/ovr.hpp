#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tweetsent/adaboost.hpp"
#include "tweetsent/knn.hpp"
#include "tweetsent/sentiment.hpp"
#include "tweetsent/svm.hpp"

namespace tweetsent {

enum class LearnerKind { kKnn, kSvm, kAdaBoost };

std::string_view to_string(LearnerKind kind);
std::optional<LearnerKind> parse_learner_kind(std::string_view name);

struct LearnerParams {
  KnnParams knn;
  SvmParams svm;
  AdaBoostParams adaboost;
  // Train the three binary problems on separate threads.
  bool parallel = true;
};

using ClassScores = std::array<double, kNumClasses>;

struct Prediction {
  Sentiment label = Sentiment::kNeutral;
  ClassScores scores{};
};

// Index of the largest score; ties go to the smaller class code.
Sentiment argmax_class(const ClassScores& scores);

/// Three-class classifier. SVM and AdaBoost keep one binary scorer per class
/// (class against the rest) and predict the argmax score. KNN is multiclass
/// on its own and is stored as a single model.
class OvrModel {
 public:
  static OvrModel from_knn(KnnModel model);
  static OvrModel from_svm(std::array<LinearBinaryModel, kNumClasses> scorers);
  static OvrModel from_adaboost(std::array<AdaBoostBinaryModel, kNumClasses> scorers);

  LearnerKind kind() const { return kind_; }
  bool native_multiclass() const { return kind_ == LearnerKind::kKnn; }
  std::size_t dimension() const { return dimension_; }

  Prediction predict(const FeatureVector& x) const;
  std::vector<Prediction> predict_all(std::span<const FeatureVector> xs) const;

  const KnnModel& knn() const { return *knn_; }
  const std::array<LinearBinaryModel, kNumClasses>& svm() const { return svm_; }
  const std::array<AdaBoostBinaryModel, kNumClasses>& adaboost() const { return adaboost_; }

 private:
  LearnerKind kind_ = LearnerKind::kSvm;
  std::size_t dimension_ = 0;
  std::optional<KnnModel> knn_;
  std::array<LinearBinaryModel, kNumClasses> svm_;
  std::array<AdaBoostBinaryModel, kNumClasses> adaboost_;
};

/// Trains the selected learner. Binary learners need every class present
/// (the error names the missing one); KNN needs at least two classes.
/// The SVM scorer for class c uses seed + code(c).
OvrModel ovr_train(LearnerKind kind, const LearnerParams& params, std::span<const FeatureVector> x,
                   std::span<const Sentiment> labels);

}  // namespace tweetsent
