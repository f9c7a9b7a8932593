#include "tweetsent/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <unordered_set>

#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/rng.hpp"
#include "tweetsent/utf8.hpp"

namespace tweetsent {

LabeledCorpus::LabeledCorpus(std::vector<TweetRecord> records) : records_(std::move(records)) {
  std::unordered_set<std::int64_t> seen;
  seen.reserve(records_.size());
  for (const auto& r : records_) {
    if (!seen.insert(r.id).second) throw DataError("duplicate record id " + std::to_string(r.id));
  }
}

std::vector<Sentiment> LabeledCorpus::labels() const {
  std::vector<Sentiment> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.label);
  return out;
}

std::array<std::size_t, kNumClasses> LabeledCorpus::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& r : records_) ++counts[code(r.label)];
  return counts;
}

namespace {

bool blank(std::string_view text) {
  for (char32_t cp : utf8::decode(text)) {
    if (!utf8::is_whitespace(cp)) return false;
  }
  return true;
}

std::size_t require_column(const csv::Table& table, const std::string& name, std::string_view role,
                           std::string_view source) {
  auto idx = table.column(name);
  if (!idx) {
    throw DataError(std::string(source) + ": missing " + std::string(role) + " column '" + name + "'");
  }
  return *idx;
}

}  // namespace

LabeledCorpus parse_corpus(std::string_view csv_text, const CsvSchema& schema, std::string_view source) {
  const csv::Table table = csv::parse(csv_text, source);
  if (table.header.empty()) throw DataError(std::string(source) + ": empty dataset (no header row)");

  const std::size_t text_col = require_column(table, schema.text_column, "text", source);
  const std::size_t label_col = require_column(table, schema.label_column, "label", source);
  std::optional<std::size_t> tag_col;
  if (!schema.tag_column.empty()) tag_col = require_column(table, schema.tag_column, "tag", source);
  std::optional<std::size_t> id_col;
  if (!schema.id_column.empty()) id_col = require_column(table, schema.id_column, "id", source);

  if (table.rows.empty()) throw DataError(std::string(source) + ": empty dataset (header only)");

  std::vector<TweetRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& fields = table.rows[i].fields;
    const std::string where = std::string(source) + ": row " + std::to_string(i + 1);
    if (fields.size() != table.header.size()) {
      throw DataError(where + ": expected " + std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    TweetRecord rec;
    rec.id = static_cast<std::int64_t>(i);
    if (id_col) {
      const std::string& s = fields[*id_col];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), rec.id);
      if (ec != std::errc{} || ptr != s.data() + s.size()) throw DataError(where + ": invalid id '" + s + "'");
    }
    rec.text = fields[text_col];
    if (blank(rec.text)) throw DataError(where + ": empty text");
    auto label = parse_sentiment(fields[label_col]);
    if (!label) throw DataError(where + ": unknown label '" + fields[label_col] + "'");
    rec.label = *label;
    if (tag_col && !fields[*tag_col].empty()) rec.tag = fields[*tag_col];
    records.push_back(std::move(rec));
  }
  return LabeledCorpus(std::move(records));
}

LabeledCorpus load_corpus(const std::filesystem::path& path, const CsvSchema& schema) {
  if (!std::filesystem::exists(path)) throw DataError("corpus file not found: " + path.string());
  return parse_corpus(csv::read_text_file(path), schema, path.string());
}

CsvSchema split_file_schema() { return CsvSchema{"text", "label", "tag", "id"}; }

std::string corpus_to_csv(const LabeledCorpus& corpus) {
  csv::Writer w;
  w.row({"id", "text", "label", "tag"});
  for (const auto& r : corpus.records()) {
    w.row({std::to_string(r.id), r.text, std::string(to_string(r.label)), r.tag.value_or("")});
  }
  return w.str();
}

std::int64_t percent_hundredths_half_up(std::size_t count, std::size_t total) {
  // floor(count * 10000 / total + 1/2) in exact integer arithmetic.
  const auto num = static_cast<std::int64_t>(count) * 20000 + static_cast<std::int64_t>(total);
  return num / (2 * static_cast<std::int64_t>(total));
}

const DistributionEntry* DistributionReport::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::string DistributionReport::to_csv() const {
  csv::Writer w;
  w.row({"key", "count", "percent"});
  for (const auto& e : entries) {
    const auto whole = e.percent_hundredths / 100;
    const auto frac = e.percent_hundredths % 100;
    std::string pct = std::to_string(whole) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
    w.row({e.key, std::to_string(e.count), pct});
  }
  return w.str();
}

DistributionReport class_distribution(const LabeledCorpus& corpus) {
  if (corpus.empty()) throw DataError("class distribution of an empty corpus");
  const auto counts = corpus.class_counts();
  DistributionReport report;
  report.total = corpus.size();
  for (Sentiment s : kAllSentiments) {
    report.entries.push_back({std::string(to_string(s)), counts[code(s)],
                              percent_hundredths_half_up(counts[code(s)], report.total)});
  }
  return report;
}

DistributionReport tag_distribution(const LabeledCorpus& corpus) {
  if (corpus.empty()) throw DataError("tag distribution of an empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : corpus.records()) ++counts[r.tag.value_or(std::string(kUntaggedKey))];
  DistributionReport report;
  report.total = corpus.size();
  for (const auto& [key, n] : counts) {
    report.entries.push_back({key, n, percent_hundredths_half_up(n, report.total)});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  return report;
}

void SplitSpec::validate() const {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw ConfigError("train_ratio must lie strictly between 0 and 1, got " + std::to_string(train_ratio));
  }
}

std::size_t train_size_for(std::size_t n, double train_ratio) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(n) + 1e-9));
}

CorpusSplit shuffle_split(const LabeledCorpus& corpus, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n = corpus.size();
  if (n < 2) throw DataError("corpus too small to split: " + std::to_string(n) + " record(s)");
  const std::size_t n_train = train_size_for(n, spec.train_ratio);
  if (n_train == 0 || n_train == n) {
    throw DataError("split of " + std::to_string(n) + " records at ratio " + std::to_string(spec.train_ratio) +
                    " leaves an empty side");
  }

  Rng rng(spec.seed);
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;

  if (!spec.stratified) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  } else {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[code(corpus[i].label)].push_back(i);
    for (Sentiment s : kAllSentiments) {
      if (by_class[code(s)].empty()) {
        throw DataError("stratified split requested but class '" + std::string(to_string(s)) +
                        "' is absent from the corpus");
      }
    }
    std::array<std::size_t, kNumClasses> quota{};
    std::array<double, kNumClasses> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double exact = spec.train_ratio * static_cast<double>(by_class[c].size());
      quota[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
      remainder[c] = exact - static_cast<double>(quota[c]);
      assigned += quota[c];
    }
    std::array<std::size_t, kNumClasses> rank = {0, 1, 2};
    std::stable_sort(rank.begin(), rank.end(), [&](auto a, auto b) { return remainder[a] > remainder[b]; });
    for (std::size_t r = 0; assigned < n_train; r = (r + 1) % kNumClasses) {
      const auto c = rank[r];
      if (quota[c] < by_class[c].size()) {
        ++quota[c];
        ++assigned;
      }
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      auto& idx = by_class[c];
      rng.shuffle(std::span<std::size_t>(idx));
      train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]));
      test_idx.insert(test_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(quota[c]), idx.end());
    }
    rng.shuffle(std::span<std::size_t>(train_idx));
    rng.shuffle(std::span<std::size_t>(test_idx));
  }

  auto gather = [&](const std::vector<std::size_t>& idx) {
    std::vector<TweetRecord> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(corpus[i]);
    return LabeledCorpus(std::move(out));
  };
  return {gather(train_idx), gather(test_idx)};
}

}  // namespace tweetsent
