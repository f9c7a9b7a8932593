#include "tweetsent/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"

namespace tweetsent {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumClasses; ++i) n += counts[i][i];
  return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t n = 0;
  for (auto c : counts[truth]) n += c;
  return n;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::size_t n = 0;
  for (const auto& row : counts) n += row[predicted];
  return n;
}

ConfusionMatrix confusion_matrix(std::span<const Sentiment> truth, std::span<const Sentiment> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("confusion matrix: " + std::to_string(truth.size()) + " truth labels vs " +
                    std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw DataError("confusion matrix: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[code(truth[i])][code(predicted[i])];
  return cm;
}

bool MetricsReport::degenerate() const {
  return std::any_of(per_class.begin(), per_class.end(),
                     [](const ClassMetrics& c) { return c.precision_undefined || c.recall_undefined; });
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  MetricsReport r;
  r.confusion = cm;
  r.total = cm.total();
  if (r.total == 0) throw DataError("metrics: empty confusion matrix");
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(r.total);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    auto& m = r.per_class[c];
    const auto tp = static_cast<double>(cm.counts[c][c]);
    const std::size_t rows = cm.row_sum(c);
    const std::size_t cols = cm.column_sum(c);
    m.support = rows;
    m.recall_undefined = rows == 0;
    m.precision_undefined = cols == 0;
    m.recall = rows ? tp / static_cast<double>(rows) : 0.0;
    m.precision = cols ? tp / static_cast<double>(cols) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    r.macro_precision += m.precision / kNumClasses;
    r.macro_recall += m.recall / kNumClasses;
    r.macro_f1 += m.f1 / kNumClasses;
  }
  return r;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

namespace {

std::string flag_of(const ClassMetrics& m) {
  if (m.precision_undefined && m.recall_undefined) return "no_truth_no_prediction";
  if (m.precision_undefined) return "never_predicted";
  if (m.recall_undefined) return "absent_from_truth";
  return "";
}

}  // namespace

std::string metrics_to_csv(const MetricsReport& r) {
  csv::Writer w;
  w.row({"class", "precision", "recall", "f1", "support", "flag"});
  for (auto s : kAllSentiments) {
    const auto& m = r.per_class[code(s)];
    w.row({std::string(to_string(s)), format_fixed(m.precision), format_fixed(m.recall), format_fixed(m.f1),
           std::to_string(m.support), flag_of(m)});
  }
  w.row({"macro", format_fixed(r.macro_precision), format_fixed(r.macro_recall), format_fixed(r.macro_f1),
         std::to_string(r.total), r.degenerate() ? "degenerate" : ""});
  w.row({"accuracy", "", "", format_fixed(r.accuracy), std::to_string(r.total), ""});
  return w.str();
}

std::string metrics_to_json(const MetricsReport& r, const ReportMetadata& meta) {
  nlohmann::ordered_json j;
  j["model"] = meta.model_name;
  j["seed"] = meta.seed;
  j["config_hash"] = meta.config_hash;
  j["averaging"] = "macro: unweighted mean over negative, neutral, positive";
  j["zero_division"] = "undefined precision or recall counts as 0 and is flagged";
  j["total"] = r.total;
  j["accuracy"] = r.accuracy;
  j["macro_precision"] = r.macro_precision;
  j["macro_recall"] = r.macro_recall;
  j["macro_f1"] = r.macro_f1;
  j["degenerate"] = r.degenerate();
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (auto s : kAllSentiments) {
    const auto& m = r.per_class[code(s)];
    classes[std::string(to_string(s))] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
                                          {"support", m.support},     {"flag", flag_of(m)}};
  }
  j["per_class"] = std::move(classes);
  nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
  for (const auto& row : r.confusion.counts) matrix.push_back(row);
  j["confusion_matrix"] = std::move(matrix);
  return j.dump(2) + "\n";
}

std::vector<TermFrequency> term_frequencies(std::span<const Tokens> docs, std::size_t top_n) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& t : doc) ++counts[t];
  }
  if (counts.empty()) throw DataError("term frequencies: corpus has no tokens");
  std::vector<TermFrequency> out;
  out.reserve(counts.size());
  for (auto& [token, n] : counts) out.push_back({token, n, 0.0});
  std::sort(out.begin(), out.end(), [](const TermFrequency& a, const TermFrequency& b) {
    return a.count != b.count ? a.count > b.count : a.token < b.token;
  });
  if (top_n && out.size() > top_n) out.resize(top_n);
  const auto max = static_cast<double>(out.front().count);
  for (auto& t : out) t.weight = static_cast<double>(t.count) / max;
  return out;
}

std::string term_frequencies_to_csv(std::span<const TermFrequency> terms) {
  csv::Writer w;
  w.row({"token", "count", "weight"});
  for (const auto& t : terms) w.row({t.token, std::to_string(t.count), format_fixed(t.weight)});
  return w.str();
}

std::vector<ComparisonRow> compare_models(std::span<const NamedReport> reports) {
  std::vector<ComparisonRow> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) {
    rows.push_back({r.name, r.report.accuracy, r.report.macro_recall, r.report.macro_f1});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.accuracy > b.accuracy; });
  return rows;
}

std::string comparison_to_csv(std::span<const ComparisonRow> rows) {
  csv::Writer w;
  w.row({"model", "accuracy", "macro_recall", "macro_f1"});
  for (const auto& r : rows) {
    w.row({r.name, format_fixed(r.accuracy), format_fixed(r.macro_recall), format_fixed(r.macro_f1)});
  }
  return w.str();
}

}  // namespace tweetsent
