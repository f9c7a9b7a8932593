#include "tweetsent/subword.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>
#include "tweetsent/csv.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/hash.hpp"
#include "tweetsent/rng.hpp"
#include "tweetsent/utf8.hpp"

namespace tweetsent {

using nlohmann::json;

void SubwordParams::validate() const {
  if (dimension < 1) throw ConfigError("subword: dimension must be >= 1");
  if (min_n < 1 || min_n > max_n) throw ConfigError("subword: require 1 <= min_n <= max_n");
  if (window < 1) throw ConfigError("subword: window must be >= 1");
  if (epochs < 1) throw ConfigError("subword: epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("subword: learning rate must be positive");
  if (buckets < 1) throw ConfigError("subword: bucket count must be >= 1");
  if (min_count < 1) throw ConfigError("subword: min_count must be >= 1");
  if (subsample < 0.0) throw ConfigError("subword: subsample threshold must be >= 0");
}

std::string_view to_string(ComposeMode mode) { return mode == ComposeMode::kSum ? "sum" : "mean"; }

std::optional<ComposeMode> parse_compose_mode(std::string_view name) {
  if (name == "mean") return ComposeMode::kMean;
  if (name == "sum") return ComposeMode::kSum;
  return std::nullopt;
}

std::vector<std::string> ngram_decompose(std::string_view word, std::size_t min_n, std::size_t max_n) {
  std::u32string wrapped = U"<";
  wrapped += utf8::decode(word);
  wrapped += U">";
  std::vector<std::string> out;
  out.push_back(utf8::encode(wrapped));
  for (std::size_t n = min_n; n <= max_n && n <= wrapped.size(); ++n) {
    if (n == wrapped.size()) continue;  // identical to the whole-word entry
    for (std::size_t i = 0; i + n <= wrapped.size(); ++i) {
      out.push_back(utf8::encode(std::u32string_view(wrapped).substr(i, n)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SubwordModel

SubwordModel::SubwordModel(SubwordParams params, Vocabulary words) : params_(params), words_(std::move(words)) {
  params_.validate();
  const std::size_t d = params_.dimension;
  word_in_.resize(words_.size() * d);
  out_.assign(words_.size() * d, 0.0);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    init_row(static_cast<std::uint32_t>(w), std::span<double>(word_in_).subspan(w * d, d));
  }
}

void SubwordModel::init_row(std::uint32_t row, std::span<double> out) const {
  std::uint64_t state = params_.seed ^ (static_cast<std::uint64_t>(row) * 0x9E3779B97F4A7C15ull);
  const double scale = 1.0 / static_cast<double>(params_.dimension);
  for (auto& x : out) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    x = (2.0 * u - 1.0) * scale;
  }
}

std::uint32_t SubwordModel::bucket_row(std::string_view ngram) const {
  return static_cast<std::uint32_t>(words_.size()) + fnv1a32(ngram) % params_.buckets;
}

std::vector<std::uint32_t> SubwordModel::input_rows(const std::string& word) const {
  std::vector<std::uint32_t> rows;
  const auto units = ngram_decompose(word, params_.min_n, params_.max_n);
  if (auto idx = words_.index_of(word)) rows.push_back(*idx);
  for (std::size_t i = 1; i < units.size(); ++i) rows.push_back(bucket_row(units[i]));
  return rows;
}

void SubwordModel::read_input_row(std::uint32_t row, std::span<double> out) const {
  const std::size_t d = params_.dimension;
  if (row < words_.size()) {
    std::copy_n(word_in_.begin() + static_cast<std::ptrdiff_t>(row * d), d, out.begin());
    return;
  }
  auto it = bucket_slot_.find(row - static_cast<std::uint32_t>(words_.size()));
  if (it == bucket_slot_.end()) {
    init_row(row, out);
    return;
  }
  std::copy_n(bucket_in_.begin() + static_cast<std::ptrdiff_t>(it->second * d), d, out.begin());
}

std::span<double> SubwordModel::mutable_input_row(std::uint32_t row) {
  const std::size_t d = params_.dimension;
  if (row < words_.size()) return std::span<double>(word_in_).subspan(row * d, d);
  const std::uint32_t bucket = row - static_cast<std::uint32_t>(words_.size());
  auto [it, inserted] = bucket_slot_.try_emplace(bucket, slot_bucket_.size());
  if (inserted) {
    slot_bucket_.push_back(bucket);
    bucket_in_.resize(bucket_in_.size() + d);
    init_row(row, std::span<double>(bucket_in_).subspan(it->second * d, d));
  }
  return std::span<double>(bucket_in_).subspan(it->second * d, d);
}

std::span<const double> SubwordModel::output_row(std::uint32_t word) const {
  const std::size_t d = params_.dimension;
  return std::span<const double>(out_).subspan(static_cast<std::size_t>(word) * d, d);
}

std::span<double> SubwordModel::mutable_output_row(std::uint32_t word) {
  const std::size_t d = params_.dimension;
  return std::span<double>(out_).subspan(static_cast<std::size_t>(word) * d, d);
}

DenseVector SubwordModel::hidden(std::span<const std::uint32_t> rows) const {
  const std::size_t d = params_.dimension;
  DenseVector h(d, 0.0);
  DenseVector row(d);
  for (auto r : rows) {
    read_input_row(r, row);
    for (std::size_t k = 0; k < d; ++k) h[k] += row[k];
  }
  return h;
}

std::vector<std::pair<std::uint32_t, std::span<const double>>> SubwordModel::bucket_rows() const {
  const std::size_t d = params_.dimension;
  std::vector<std::pair<std::uint32_t, std::span<const double>>> rows;
  rows.reserve(slot_bucket_.size());
  for (std::size_t slot = 0; slot < slot_bucket_.size(); ++slot) {
    rows.emplace_back(slot_bucket_[slot], std::span<const double>(bucket_in_).subspan(slot * d, d));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return rows;
}

void SubwordModel::restore(std::vector<double> word_in, std::vector<double> out,
                           const std::vector<std::pair<std::uint32_t, std::vector<double>>>& buckets) {
  const std::size_t d = params_.dimension;
  if (word_in.size() != words_.size() * d || out.size() != words_.size() * d) {
    throw ModelFormatError("subword model: table size does not match vocabulary");
  }
  word_in_ = std::move(word_in);
  out_ = std::move(out);
  bucket_slot_.clear();
  slot_bucket_.clear();
  bucket_in_.clear();
  for (const auto& [bucket, values] : buckets) {
    if (values.size() != d || bucket >= params_.buckets) throw ModelFormatError("subword model: bad bucket row");
    auto row = mutable_input_row(static_cast<std::uint32_t>(words_.size()) + bucket);
    std::copy(values.begin(), values.end(), row.begin());
  }
}

// ---------------------------------------------------------------------------
// Loss and gradients

namespace {

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

// Accumulates dL/dh into grad_h and reports dL/du_w = g * h via on_output(w, g).
template <typename OnOutput>
double pair_kernel(const SubwordModel& model, std::span<const double> h, std::uint32_t context,
                   std::span<const std::uint32_t> negatives, std::span<double> grad_h, OnOutput&& on_output) {
  std::fill(grad_h.begin(), grad_h.end(), 0.0);
  double loss = 0.0;
  auto visit = [&](std::uint32_t w, bool positive) {
    const auto u = model.output_row(w);
    double s = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) s += u[k] * h[k];
    const double g = positive ? sigmoid(s) - 1.0 : sigmoid(s);
    loss -= positive ? log_sigmoid(s) : log_sigmoid(-s);
    for (std::size_t k = 0; k < h.size(); ++k) grad_h[k] += g * u[k];
    on_output(w, g);
  };
  visit(context, true);
  for (auto n : negatives) visit(n, false);
  return loss;
}

class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      acc += std::pow(static_cast<double>(vocab.frequency(i)), 0.75);
      cumulative_.push_back(acc);
    }
  }

  std::uint32_t draw(Rng& rng) const {
    const double x = rng.uniform_real() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

  void draw_into(Rng& rng, std::uint32_t avoid, std::size_t count, std::vector<std::uint32_t>& out) const {
    out.clear();
    if (cumulative_.size() < 2) return;
    while (out.size() < count) {
      const auto n = draw(rng);
      if (n != avoid) out.push_back(n);
    }
  }

 private:
  std::vector<double> cumulative_;
};

std::vector<std::vector<std::uint32_t>> encode_docs(const Vocabulary& vocab, std::span<const Tokens> docs) {
  std::vector<std::vector<std::uint32_t>> ids;
  ids.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<std::uint32_t> row;
    for (const auto& t : doc) {
      if (auto idx = vocab.index_of(t)) row.push_back(*idx);
    }
    ids.push_back(std::move(row));
  }
  return ids;
}

}  // namespace

double pair_loss(const SubwordModel& model, const PairExample& pair) {
  const auto rows = model.input_rows(model.words().token(pair.center));
  const DenseVector h = model.hidden(rows);
  DenseVector grad(model.dimension());
  return pair_kernel(model, h, pair.context, pair.negatives, grad, [](std::uint32_t, double) {});
}

PairGradient pair_gradient(const SubwordModel& model, const PairExample& pair) {
  const auto rows = model.input_rows(model.words().token(pair.center));
  const DenseVector h = model.hidden(rows);
  DenseVector grad_h(model.dimension());
  PairGradient out;
  pair_kernel(model, h, pair.context, pair.negatives, grad_h, [&](std::uint32_t w, double g) {
    auto& acc = out.output[w];
    acc.resize(h.size(), 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) acc[k] += g * h[k];
  });
  for (auto r : rows) {
    auto& acc = out.input[r];
    acc.resize(h.size(), 0.0);
    for (std::size_t k = 0; k < h.size(); ++k) acc[k] += grad_h[k];
  }
  return out;
}

double mean_corpus_loss(const SubwordModel& model, std::span<const Tokens> docs, std::uint64_t seed) {
  const auto& vocab = model.words();
  const NegativeSampler sampler(vocab);
  const auto ids = encode_docs(vocab, docs);
  std::vector<std::vector<std::uint32_t>> rows(vocab.size());
  std::vector<DenseVector> hidden(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    rows[w] = model.input_rows(vocab.token(w));
    hidden[w] = model.hidden(rows[w]);
  }
  Rng rng(seed);
  DenseVector grad(model.dimension());
  std::vector<std::uint32_t> negs;
  double total = 0.0;
  std::size_t pairs = 0;
  const auto window = static_cast<std::ptrdiff_t>(model.params().window);
  for (const auto& doc : ids) {
    const auto n = static_cast<std::ptrdiff_t>(doc.size());
    for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
      for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - window); c <= std::min(n - 1, pos + window); ++c) {
        if (c == pos) continue;
        const auto ctx = doc[static_cast<std::size_t>(c)];
        sampler.draw_into(rng, ctx, model.params().negatives, negs);
        total += pair_kernel(model, hidden[doc[static_cast<std::size_t>(pos)]], ctx, negs, grad,
                             [](std::uint32_t, double) {});
        ++pairs;
      }
    }
  }
  return pairs ? total / static_cast<double>(pairs) : 0.0;
}

SubwordModel train_skipgram(std::span<const Tokens> docs, const SubwordParams& params, SkipgramReport* report) {
  params.validate();
  if (docs.empty()) throw DataError("skip-gram: empty corpus");
  Vocabulary vocab = Vocabulary::build(docs, params.min_count);
  if (vocab.size() == 0) throw DataError("skip-gram: no token reaches min_count");

  SubwordModel model(params, vocab);
  const std::size_t d = params.dimension;
  const auto ids = encode_docs(vocab, docs);
  std::vector<std::vector<std::uint32_t>> rows(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) rows[w] = model.input_rows(vocab.token(w));

  std::size_t corpus_tokens = 0;
  for (const auto& doc : ids) corpus_tokens += doc.size();
  if (corpus_tokens == 0) throw DataError("skip-gram: corpus has no in-vocabulary tokens");
  const double total_steps = static_cast<double>(corpus_tokens * params.epochs);

  SkipgramReport local;
  if (report) local.initial_loss = mean_corpus_loss(model, docs, params.seed);

  const NegativeSampler sampler(vocab);
  Rng rng(params.seed);
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  DenseVector h(d);
  DenseVector grad_h(d);
  DenseVector row(d);
  std::vector<std::uint32_t> negs;
  std::vector<std::uint32_t> kept;
  std::size_t processed = 0;

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    std::size_t epoch_pairs = 0;
    for (std::size_t di : order) {
      const auto& doc = ids[di];
      kept.clear();
      for (auto w : doc) {
        if (params.subsample > 0.0) {
          const double f = static_cast<double>(vocab.frequency(w)) / static_cast<double>(corpus_tokens);
          const double keep = std::sqrt(params.subsample / f) + params.subsample / f;
          if (keep < 1.0 && rng.uniform_real() >= keep) continue;
        }
        kept.push_back(w);
      }
      const auto n = static_cast<std::ptrdiff_t>(kept.size());
      for (std::ptrdiff_t pos = 0; pos < n; ++pos) {
        const double lr = params.learning_rate * std::max(0.0, 1.0 - static_cast<double>(processed) / total_steps);
        const auto reach = static_cast<std::ptrdiff_t>(1 + rng.uniform_index(params.window));
        const auto& center_rows = rows[kept[static_cast<std::size_t>(pos)]];
        for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, pos - reach); c <= std::min(n - 1, pos + reach); ++c) {
          if (c == pos) continue;
          const auto ctx = kept[static_cast<std::size_t>(c)];
          sampler.draw_into(rng, ctx, params.negatives, negs);
          std::fill(h.begin(), h.end(), 0.0);
          for (auto r : center_rows) {
            model.read_input_row(r, row);
            for (std::size_t k = 0; k < d; ++k) h[k] += row[k];
          }
          const double loss = pair_kernel(model, h, ctx, negs, grad_h, [&](std::uint32_t w, double g) {
            auto u = model.mutable_output_row(w);
            for (std::size_t k = 0; k < d; ++k) u[k] -= lr * g * h[k];
          });
          if (!std::isfinite(loss)) {
            throw NumericError("skip-gram: non-finite loss at epoch " + std::to_string(epoch + 1) + ", update " +
                               std::to_string(local.updates + 1));
          }
          for (auto r : center_rows) {
            auto in = model.mutable_input_row(r);
            for (std::size_t k = 0; k < d; ++k) in[k] -= lr * grad_h[k];
          }
          epoch_loss += loss;
          ++epoch_pairs;
          ++local.updates;
        }
      }
      processed += doc.size();
    }
    local.epoch_loss.push_back(epoch_pairs ? epoch_loss / static_cast<double>(epoch_pairs) : 0.0);
  }

  if (report) {
    local.final_loss = mean_corpus_loss(model, docs, params.seed);
    *report = std::move(local);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Embedding

Embedding embed_token(const SubwordModel& model, const std::string& word) {
  const std::size_t d = model.dimension();
  const auto rows = model.input_rows(word);
  if (rows.empty()) return {DenseVector(d, 0.0), true};
  DenseVector v = model.hidden(rows);
  if (model.params().compose == ComposeMode::kMean) {
    for (auto& x : v) x /= static_cast<double>(rows.size());
  }
  return {std::move(v), false};
}

Embedding embed_document(const SubwordModel& model, const Tokens& tokens) {
  return embed_document(model.dimension(), tokens, [&](const std::string& t) { return embed_token(model, t); });
}

EmbeddingTable export_word_vectors(const SubwordModel& model) {
  EmbeddingTable table(model.dimension());
  for (const auto& w : model.words().tokens()) table.add(w, embed_token(model, w).vector);
  return table;
}

// ---------------------------------------------------------------------------
// Persistence: "tweetsent-subword 1 <fnv64 of body> <body bytes>\n" + body, where
// body is a JSON header line followed by raw little-endian doubles.

namespace {

constexpr std::string_view kSubwordMagic = "tweetsent-subword";
constexpr int kSubwordVersion = 1;

void append_doubles(std::string& out, std::span<const double> values) {
  const auto* bytes = reinterpret_cast<const char*>(values.data());
  out.append(bytes, values.size() * sizeof(double));
}

}  // namespace

void save_subword_model(const SubwordModel& model, const std::filesystem::path& path) {
  const auto& p = model.params();
  const auto& v = model.words();
  const auto buckets = model.bucket_rows();
  json header = {
      {"dimension", p.dimension},     {"min_n", p.min_n},
      {"max_n", p.max_n},             {"window", p.window},
      {"negatives", p.negatives},     {"epochs", p.epochs},
      {"learning_rate", p.learning_rate}, {"seed", p.seed},
      {"buckets", p.buckets},         {"min_count", p.min_count},
      {"subsample", p.subsample},     {"compose", std::string(to_string(p.compose))},
      {"tokens", v.tokens()},         {"frequencies", v.frequencies()},
      {"document_frequencies", v.document_frequencies()}, {"num_documents", v.num_documents()},
      {"materialized_buckets", buckets.size()},
  };
  std::string body = header.dump() + "\n";
  append_doubles(body, model.word_input());
  append_doubles(body, model.output());
  for (const auto& [bucket, values] : buckets) {
    const double id = static_cast<double>(bucket);
    append_doubles(body, std::span<const double>(&id, 1));
    append_doubles(body, values);
  }
  std::string file = std::string(kSubwordMagic) + " " + std::to_string(kSubwordVersion) + " " +
                     hex64(fnv1a64(body)) + " " + std::to_string(body.size()) + "\n";
  file += body;
  csv::write_text_file(path, file);
}

SubwordModel load_subword_model(const std::filesystem::path& path) {
  const std::string file = csv::read_text_file(path);
  const auto nl = file.find('\n');
  if (nl == std::string::npos) throw ModelFormatError(path.string() + ": truncated subword model");
  std::string magic;
  int version = 0;
  std::string checksum;
  std::size_t length = 0;
  {
    std::istringstream head(file.substr(0, nl));
    head >> magic >> version >> checksum >> length;
  }
  if (magic != kSubwordMagic) throw ModelFormatError(path.string() + ": not a subword model file");
  if (version != kSubwordVersion) {
    throw ModelFormatError(path.string() + ": unsupported subword model version " + std::to_string(version));
  }
  const std::string_view body(file.data() + nl + 1, file.size() - nl - 1);
  if (body.size() != length) throw ModelFormatError(path.string() + ": truncated subword model");
  if (hex64(fnv1a64(body)) != checksum) throw ModelFormatError(path.string() + ": checksum mismatch");

  const auto hl = body.find('\n');
  const json h = json::parse(body.substr(0, hl));
  SubwordParams p;
  p.dimension = h.at("dimension");
  p.min_n = h.at("min_n");
  p.max_n = h.at("max_n");
  p.window = h.at("window");
  p.negatives = h.at("negatives");
  p.epochs = h.at("epochs");
  p.learning_rate = h.at("learning_rate");
  p.seed = h.at("seed");
  p.buckets = h.at("buckets");
  p.min_count = h.at("min_count");
  p.subsample = h.at("subsample");
  p.compose = parse_compose_mode(h.at("compose").get<std::string>()).value_or(ComposeMode::kMean);
  Vocabulary vocab(h.at("tokens"), h.at("frequencies"), h.at("document_frequencies"), h.at("num_documents"),
                   p.min_count);
  const std::size_t n_buckets = h.at("materialized_buckets");

  SubwordModel model(p, std::move(vocab));
  const std::size_t d = p.dimension;
  const std::size_t table = model.words().size() * d;
  std::string_view data = body.substr(hl + 1);
  const std::size_t expected = (2 * table + n_buckets * (d + 1)) * sizeof(double);
  if (data.size() != expected) throw ModelFormatError(path.string() + ": vector block has wrong size");
  auto take = [&](std::size_t count) {
    std::vector<double> out(count);
    std::memcpy(out.data(), data.data(), count * sizeof(double));
    data.remove_prefix(count * sizeof(double));
    return out;
  };
  auto word_in = take(table);
  auto out = take(table);
  std::vector<std::pair<std::uint32_t, std::vector<double>>> buckets;
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const auto id = take(1)[0];
    buckets.emplace_back(static_cast<std::uint32_t>(id), take(d));
  }
  model.restore(std::move(word_in), std::move(out), buckets);
  return model;
}

}  // namespace tweetsent
