#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tweetsent/preprocess.hpp"
#include "tweetsent/sentiment.hpp"

namespace tweetsent {

/// counts[t][p]: items with true class t predicted as class p.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t row_sum(std::size_t truth) const;
  std::size_t column_sum(std::size_t predicted) const;
};

ConfusionMatrix confusion_matrix(std::span<const Sentiment> truth, std::span<const Sentiment> predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  bool precision_undefined = false;  // class never predicted
  bool recall_undefined = false;     // class absent from truth
};

struct MetricsReport {
  double accuracy = 0.0;
  std::array<ClassMetrics, kNumClasses> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion;
  std::size_t total = 0;

  bool degenerate() const;
};

// Undefined ratios count as 0 and are flagged; F1 is 0 when precision and
// recall are both 0. Macro values are plain means over the three classes.
MetricsReport metrics(const ConfusionMatrix& cm);

struct ReportMetadata {
  std::string model_name;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// `class,precision,recall,f1,support,flag` rows per class, then macro and
// accuracy rows.
std::string metrics_to_csv(const MetricsReport& report);
// Structured JSON with metadata, metrics, averaging note and the matrix.
std::string metrics_to_json(const MetricsReport& report, const ReportMetadata& meta);

struct TermFrequency {
  std::string token;
  std::size_t count = 0;
  double weight = 0.0;  // count / max count
};

// Sorted by count descending, then token. top_n == 0 keeps everything.
std::vector<TermFrequency> term_frequencies(std::span<const Tokens> docs, std::size_t top_n = 0);
std::string term_frequencies_to_csv(std::span<const TermFrequency> terms);

struct NamedReport {
  std::string name;
  MetricsReport report;
};

struct ComparisonRow {
  std::string name;
  double accuracy = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

// Rows sorted by accuracy descending; equal accuracies keep input order.
std::vector<ComparisonRow> compare_models(std::span<const NamedReport> reports);
std::string comparison_to_csv(std::span<const ComparisonRow> rows);

// Fixed-point text with the given number of decimals, used in every export.
std::string format_fixed(double value, int decimals = 6);

}  // namespace tweetsent
