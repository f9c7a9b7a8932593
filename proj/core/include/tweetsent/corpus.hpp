#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tweetsent/sentiment.hpp"

namespace tweetsent {

struct TweetRecord {
  std::int64_t id = 0;
  std::string text;
  Sentiment label = Sentiment::kNeutral;
  std::optional<std::string> tag;
};

/// Ordered, immutable collection of labeled tweets. Ids are distinct;
/// order is the order records were supplied in.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  explicit LabeledCorpus(std::vector<TweetRecord> records);

  const std::vector<TweetRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TweetRecord& operator[](std::size_t i) const { return records_[i]; }

  std::vector<Sentiment> labels() const;
  std::array<std::size_t, kNumClasses> class_counts() const;

 private:
  std::vector<TweetRecord> records_;
};

/// Column names of a corpus CSV. `tag_column` and `id_column` are optional;
/// when `id_column` is empty ids are assigned 0..N-1 in file order.
struct CsvSchema {
  std::string text_column = "text";
  std::string label_column = "label";
  std::string tag_column;
  std::string id_column;
};

// Row numbers in errors are 1-based data rows (the header is not counted).
LabeledCorpus parse_corpus(std::string_view csv_text, const CsvSchema& schema,
                           std::string_view source = "<memory>");
LabeledCorpus load_corpus(const std::filesystem::path& path, const CsvSchema& schema);

// Writes `id,text,label,tag`, the schema produced by split files.
std::string corpus_to_csv(const LabeledCorpus& corpus);
CsvSchema split_file_schema();

inline constexpr std::string_view kUntaggedKey = "untagged";

struct DistributionEntry {
  std::string key;
  std::size_t count = 0;
  // Percentage in hundredths, rounded half-up: 4895 means 48.95%.
  std::int64_t percent_hundredths = 0;

  double percent() const { return static_cast<double>(percent_hundredths) / 100.0; }
};

struct DistributionReport {
  std::vector<DistributionEntry> entries;
  std::size_t total = 0;

  const DistributionEntry* find(std::string_view key) const;
  // `key,count,percent` with two decimals.
  std::string to_csv() const;
};

std::int64_t percent_hundredths_half_up(std::size_t count, std::size_t total);

// One entry per class in code order, including empty classes.
DistributionReport class_distribution(const LabeledCorpus& corpus);
// Sorted by count descending, then key. Untagged records go under "untagged".
DistributionReport tag_distribution(const LabeledCorpus& corpus);

struct SplitSpec {
  double train_ratio = 0.8;
  std::uint64_t seed = 42;
  bool stratified = false;

  void validate() const;
};

struct CorpusSplit {
  LabeledCorpus train;
  LabeledCorpus test;
};

std::size_t train_size_for(std::size_t n, double train_ratio);

/// Seeded shuffle split. The train set holds floor(train_ratio * N) records.
/// Unstratified: one Fisher-Yates pass over record indices, the first part
/// becomes train. Stratified: each class is shuffled separately (classes in
/// code order, one generator), per-class train counts are floor(ratio * n_c)
/// plus one for the classes with the largest remainders until the total is
/// reached, then train and test are each shuffled once more.
CorpusSplit shuffle_split(const LabeledCorpus& corpus, const SplitSpec& spec);

}  // namespace tweetsent
