#include <benchmark/benchmark.h>

#include <vector>

#include "tweetsent/config.hpp"
#include "tweetsent/corpus.hpp"
#include "tweetsent/experiment.hpp"
#include "tweetsent/knn.hpp"
#include "tweetsent/ovr.hpp"
#include "tweetsent/preprocess.hpp"
#include "tweetsent/svm.hpp"
#include "tweetsent/synthetic.hpp"
#include "tweetsent/vocabulary.hpp"

namespace {

using namespace tweetsent;

struct Workload {
  LabeledCorpus corpus;
  PreprocessConfig preprocess;
  std::vector<Tokens> docs;
  Vocabulary vocabulary;
  std::vector<FeatureVector> x;
  std::vector<Sentiment> y;
};

const Workload& workload() {
  static const Workload w = [] {
    Workload out;
    SyntheticSpec spec;
    spec.tweets = 1200;
    out.corpus = generate_synthetic_corpus(spec);
    out.preprocess = fit_preprocess(ExperimentConfig::from_values({}), out.corpus);
    out.docs = preprocess_all(out.corpus, out.preprocess);
    out.vocabulary = Vocabulary::build(out.docs);
    for (const auto& d : out.docs) out.x.emplace_back(bow_transform(d, out.vocabulary));
    out.y = out.corpus.labels();
    return out;
  }();
  return w;
}

void BM_Preprocess(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) {
    for (const auto& r : w.corpus.records()) benchmark::DoNotOptimize(run_pipeline(r.text, w.preprocess));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.corpus.size()));
}
BENCHMARK(BM_Preprocess)->Unit(benchmark::kMillisecond);

void BM_BagOfWords(benchmark::State& state) {
  const auto& w = workload();
  for (auto _ : state) {
    const auto vocab = Vocabulary::build(w.docs);
    for (const auto& d : w.docs) benchmark::DoNotOptimize(bow_transform(d, vocab));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.docs.size()));
}
BENCHMARK(BM_BagOfWords)->Unit(benchmark::kMillisecond);

void BM_KnnQuery(benchmark::State& state) {
  const auto& w = workload();
  KnnParams p;
  p.k = 5;
  p.metric = state.range(0) == 0 ? DistanceMetric::kCosine : DistanceMetric::kEuclidean;
  const auto model = KnnModel::fit(w.x, w.y, p);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.scores(w.x[i]));
    i = (i + 1) % w.x.size();
  }
}
BENCHMARK(BM_KnnQuery)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SvmTrain(benchmark::State& state) {
  const auto& w = workload();
  std::vector<int> y;
  for (auto s : w.y) y.push_back(s == Sentiment::kPositive ? 1 : -1);
  SvmParams p;
  p.epochs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(svm_train_binary(w.x, y, p));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(w.x.size()));
}
BENCHMARK(BM_SvmTrain)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
