#include "tweetsent/vocabulary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"

namespace tweetsent {

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> frequencies,
                       std::vector<std::size_t> document_frequencies, std::size_t num_documents,
                       std::size_t min_count)
    : tokens_(std::move(tokens)),
      frequencies_(std::move(frequencies)),
      document_frequencies_(std::move(document_frequencies)),
      num_documents_(num_documents),
      min_count_(min_count) {
  if (frequencies_.size() != tokens_.size() || document_frequencies_.size() != tokens_.size()) {
    throw DataError("vocabulary: column lengths differ");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second) {
      throw DataError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
    if (frequencies_[i] < min_count_) throw DataError("vocabulary: token below min_count: " + tokens_[i]);
  }
}

Vocabulary Vocabulary::build(std::span<const Tokens> docs, std::size_t min_count) {
  if (docs.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> counts;  // freq, doc freq
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> seen_here;
    for (const auto& t : doc) {
      auto [it, inserted] = counts.try_emplace(t, 0, 0);
      if (inserted) order.push_back(t);
      ++it->second.first;
      if (seen_here.insert(it->first).second) ++it->second.second;
    }
  }
  std::vector<std::string> tokens;
  std::vector<std::size_t> freq;
  std::vector<std::size_t> df;
  for (auto& t : order) {
    const auto [f, d] = counts.at(t);
    if (f < min_count) continue;
    tokens.push_back(std::move(t));
    freq.push_back(f);
    df.push_back(d);
  }
  return Vocabulary(std::move(tokens), std::move(freq), std::move(df), docs.size(), min_count);
}

std::optional<std::uint32_t> Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Vocabulary::to_csv() const {
  csv::Writer w;
  w.row({"token", "index", "frequency"});
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    w.row({tokens_[i], std::to_string(i), std::to_string(frequencies_[i])});
  }
  return w.str();
}

std::string_view to_string(BowWeighting w) {
  switch (w) {
    case BowWeighting::kCount:
      return "count";
    case BowWeighting::kBinary:
      return "binary";
    case BowWeighting::kTfIdf:
      return "tfidf";
  }
  return "count";
}

std::optional<BowWeighting> parse_bow_weighting(std::string_view name) {
  if (name == "count") return BowWeighting::kCount;
  if (name == "binary") return BowWeighting::kBinary;
  if (name == "tfidf") return BowWeighting::kTfIdf;
  return std::nullopt;
}

SparseVector bow_transform(const Tokens& tokens, const Vocabulary& vocab, BowWeighting weighting) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    if (auto idx = vocab.index_of(t)) counts[*idx] += 1.0;
  }
  SparseVector v;
  v.dimension = vocab.size();
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  for (const auto& [idx, count] : counts) {
    double value = count;
    if (weighting == BowWeighting::kBinary) {
      value = 1.0;
    } else if (weighting == BowWeighting::kTfIdf) {
      const double n = static_cast<double>(vocab.num_documents());
      const double df = static_cast<double>(vocab.document_frequency(idx));
      value = count * (std::log((1.0 + n) / (1.0 + df)) + 1.0);
    }
    v.indices.push_back(idx);
    v.values.push_back(value);
  }
  return v;
}

}  // namespace tweetsent
