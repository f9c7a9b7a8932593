#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "tweetsent/error.hpp"
#include "tweetsent/subword.hpp"

using namespace tweetsent;

namespace {

SubwordParams small_params(std::size_t dim = 5) {
  SubwordParams p;
  p.dimension = dim;
  p.min_n = 2;
  p.max_n = 3;
  p.window = 2;
  p.negatives = 3;
  p.epochs = 5;
  p.learning_rate = 0.05;
  p.buckets = 97;
  p.seed = 7;
  return p;
}

double cosine(const DenseVector& a, const DenseVector& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  return ab / std::sqrt(aa * bb);
}

double log_sigmoid(double x) { return -std::log1p(std::exp(-x)); }

// Loss recomputed from the model's tables without the library's kernel.
double reference_loss(const SubwordModel& m, const PairExample& pair) {
  const std::size_t d = m.dimension();
  DenseVector h(d, 0.0);
  DenseVector row(d);
  for (auto r : m.input_rows(m.words().token(pair.center))) {
    m.read_input_row(r, row);
    for (std::size_t k = 0; k < d; ++k) h[k] += row[k];
  }
  auto score = [&](std::uint32_t w) {
    double s = 0;
    const auto u = m.output_row(w);
    for (std::size_t k = 0; k < d; ++k) s += u[k] * h[k];
    return s;
  };
  double loss = -log_sigmoid(score(pair.context));
  for (auto n : pair.negatives) loss -= log_sigmoid(-score(n));
  return loss;
}

const std::vector<Tokens>& toy_corpus() {
  static const std::vector<Tokens> docs = {{"بیت", "کوین", "بالا", "رفت"}, {"اتریوم", "پایین", "آمد", "بیت"}};
  return docs;
}

std::vector<Tokens> cooccurrence_corpus() {
  std::vector<Tokens> docs;
  for (int i = 0; i < 60; ++i) {
    docs.push_back({"apple", "xenon", "berry", "yodel", "zebra"});
    docs.push_back({"cloud", "pivot", "quartz", "rusty"});
  }
  return docs;
}

}  // namespace

TEST(SubwordParams, Validation) {
  SubwordParams p;
  p.min_n = 4;
  p.max_n = 3;
  EXPECT_THROW(p.validate(), ConfigError);
  p = SubwordParams{};
  p.dimension = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = SubwordParams{};
  p.window = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_NO_THROW(SubwordParams{}.validate());
  EXPECT_EQ(SubwordParams{}.dimension, 300u);
}

TEST(SubwordModel, InputRowsAreWordRowPlusBuckets) {
  const auto vocab = Vocabulary::build(toy_corpus(), 1);
  const SubwordModel m(small_params(), vocab);
  const auto rows = m.input_rows("بیت");
  const auto grams = ngram_decompose("بیت", 2, 3);
  ASSERT_EQ(rows.size(), grams.size());
  EXPECT_EQ(rows[0], *vocab.index_of("بیت"));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i], vocab.size());
    EXPECT_LT(rows[i], vocab.size() + 97);
  }
  EXPECT_EQ(m.input_rows("ناشناخته").size(), ngram_decompose("ناشناخته", 2, 3).size() - 1);
}

TEST(SubwordModel, PairLossMatchesDirectComputation) {
  const auto vocab = Vocabulary::build(toy_corpus(), 1);
  SubwordModel m(small_params(), vocab);
  Rng rng(1);
  for (std::uint32_t w = 0; w < vocab.size(); ++w) {
    for (auto& x : m.mutable_output_row(w)) x = rng.uniform_real(-0.5, 0.5);
  }
  const PairExample pair{0, 1, {2, 3, 5}};
  EXPECT_NEAR(pair_loss(m, pair), reference_loss(m, pair), 1e-12);
}

TEST(SubwordModel, GradientMatchesCentralDifferences) {
  const auto vocab = Vocabulary::build(toy_corpus(), 1);
  Rng rng(2024);
  std::size_t checks = 0;
  for (int trial = 0; trial < 8; ++trial) {
    SubwordModel m(small_params(), vocab);
    const auto v = static_cast<std::uint32_t>(vocab.size());
    for (std::uint32_t w = 0; w < v; ++w) {
      for (auto& x : m.mutable_output_row(w)) x = rng.uniform_real(-0.8, 0.8);
      for (auto& x : m.mutable_input_row(w)) x = rng.uniform_real(-0.8, 0.8);
    }
    PairExample pair;
    pair.center = static_cast<std::uint32_t>(rng.uniform_index(v));
    pair.context = static_cast<std::uint32_t>(rng.uniform_index(v));
    for (int k = 0; k < 3; ++k) pair.negatives.push_back(static_cast<std::uint32_t>(rng.uniform_index(v)));
    for (auto r : m.input_rows(vocab.token(pair.center))) {
      for (auto& x : m.mutable_input_row(r)) x = rng.uniform_real(-0.8, 0.8);
    }

    const auto grad = pair_gradient(m, pair);
    const double eps = 1e-6;
    auto check = [&](std::span<double> param, const DenseVector& analytic) {
      for (std::size_t k = 0; k < param.size(); ++k) {
        const double saved = param[k];
        param[k] = saved + eps;
        const double up = pair_loss(m, pair);
        param[k] = saved - eps;
        const double down = pair_loss(m, pair);
        param[k] = saved;
        const double numeric = (up - down) / (2 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-3});
        EXPECT_LT(std::abs(numeric - analytic[k]) / denom, 1e-4) << "component " << k;
        ++checks;
      }
    };
    for (const auto& [row, g] : grad.input) check(m.mutable_input_row(row), g);
    for (const auto& [w, g] : grad.output) check(m.mutable_output_row(w), g);
  }
  EXPECT_GE(checks, 20u);
}

TEST(Skipgram, MeanLossDecreases) {
  SkipgramReport report;
  auto p = small_params(8);
  p.epochs = 20;
  train_skipgram(cooccurrence_corpus(), p, &report);
  EXPECT_LT(report.final_loss, report.initial_loss);
  EXPECT_EQ(report.epoch_loss.size(), 20u);
  EXPECT_GT(report.updates, 0u);
}

TEST(Skipgram, SharedContextsBringWordsTogether) {
  auto p = small_params(16);
  p.epochs = 15;
  p.window = 4;
  const auto m = train_skipgram(cooccurrence_corpus(), p);
  const auto a = embed_token(m, "apple").vector;
  const auto b = embed_token(m, "berry").vector;
  const auto c = embed_token(m, "cloud").vector;
  EXPECT_GT(cosine(a, b), cosine(a, c));
}

TEST(Skipgram, SameSeedSameModel) {
  const auto p = small_params(6);
  const auto a = train_skipgram(toy_corpus(), p);
  const auto b = train_skipgram(toy_corpus(), p);
  EXPECT_EQ(a.word_input(), b.word_input());
  EXPECT_EQ(a.output(), b.output());
  auto q = p;
  q.seed = 8;
  EXPECT_NE(train_skipgram(toy_corpus(), q).word_input(), a.word_input());
}

TEST(Skipgram, SubsamplingStillDeterministic) {
  auto p = small_params(6);
  p.subsample = 1e-2;
  const auto a = train_skipgram(cooccurrence_corpus(), p);
  const auto b = train_skipgram(cooccurrence_corpus(), p);
  EXPECT_EQ(a.word_input(), b.word_input());
}

TEST(Skipgram, Errors) {
  EXPECT_THROW(train_skipgram(std::vector<Tokens>{}, small_params()), DataError);
  auto p = small_params();
  p.min_count = 10;
  EXPECT_THROW(train_skipgram(toy_corpus(), p), DataError);
}

TEST(Skipgram, DivergenceReportsStep) {
  auto p = small_params(8);
  p.learning_rate = 1e200;
  try {
    train_skipgram(cooccurrence_corpus(), p);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("update"), std::string::npos);
  }
}

TEST(SubwordEmbedding, OovWordsGetNonzeroVectors) {
  const auto m = train_skipgram(toy_corpus(), small_params());
  const auto e = embed_token(m, "بیتکوین");
  EXPECT_FALSE(e.missing);
  double norm = 0;
  for (double x : e.vector) norm += x * x;
  EXPECT_GT(norm, 0.0);
  EXPECT_EQ(e.vector.size(), 5u);
}

TEST(SubwordEmbedding, TokenIsMeanOfRows) {
  const auto m = train_skipgram(toy_corpus(), small_params());
  const auto rows = m.input_rows("کوین");
  DenseVector mean(5, 0.0);
  DenseVector row(5);
  for (auto r : rows) {
    m.read_input_row(r, row);
    for (std::size_t k = 0; k < 5; ++k) mean[k] += row[k] / static_cast<double>(rows.size());
  }
  const auto e = embed_token(m, "کوین").vector;
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(e[k], mean[k], 1e-12);
}

TEST(SubwordEmbedding, SingleTokenDocumentEqualsToken) {
  const auto m = train_skipgram(toy_corpus(), small_params());
  for (const auto& t : {"بیت", "ناشناس"}) EXPECT_EQ(embed_document(m, {t}).vector, embed_token(m, t).vector);
  EXPECT_TRUE(embed_document(m, {}).missing);
  const auto table = export_word_vectors(m);
  EXPECT_EQ(table.size(), m.words().size());
  EXPECT_EQ(*table.find("بیت"), embed_token(m, "بیت").vector);
}

TEST(SubwordPersistence, RoundTripAndCorruption) {
  tweetsent::testing::TempDir dir("subword");
  const auto m = train_skipgram(toy_corpus(), small_params());
  save_subword_model(m, dir / "m.bin");
  const auto back = load_subword_model(dir / "m.bin");
  EXPECT_EQ(back.word_input(), m.word_input());
  EXPECT_EQ(back.output(), m.output());
  EXPECT_EQ(back.words().tokens(), m.words().tokens());
  for (const auto& t : {"بیت", "کوینها", "zzz"}) EXPECT_EQ(embed_token(back, t).vector, embed_token(m, t).vector);

  std::string bytes = tweetsent::testing::read_file(dir / "m.bin");
  std::string flipped = bytes;
  flipped[flipped.size() - 3] ^= 0x40;
  tweetsent::testing::write_file(dir / "flipped.bin", flipped);
  EXPECT_THROW(load_subword_model(dir / "flipped.bin"), ModelFormatError);
  tweetsent::testing::write_file(dir / "short.bin", bytes.substr(0, bytes.size() - 10));
  EXPECT_THROW(load_subword_model(dir / "short.bin"), ModelFormatError);
  tweetsent::testing::write_file(dir / "other.bin", "hello 1 0 0\n");
  EXPECT_THROW(load_subword_model(dir / "other.bin"), ModelFormatError);
}
