// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "longner/decoder.hpp"
#include "longner/evaluator.hpp"
#include "longner/stats.hpp"
#include "longner/trainer.hpp"
#include "support/generators.hpp"

using namespace longner;

namespace {

struct Fixture {
  Corpus corpus;
  TaggerModel model;
  Corpus predicted;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    std::mt19937_64 rng(1);
    const auto lang = testing::separable_language(7, 40);
    Fixture out;
    const auto train_set = testing::separable_corpus(rng, lang, 500, 4, 30);
    out.model = train(train_set, TrainConfig{2, 1, 1.0, 1});
    out.corpus = testing::separable_corpus(rng, lang, 4000, 10, 60);
    out.predicted = predict_corpus(out.model, out.corpus);
    return out;
  }();
  return f;
}

void BM_predict_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::predict_corpus(f.model, f.corpus));
}

void BM_predict_parallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(predict_corpus(f.model, f.corpus));
}

void BM_evaluate_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate(f.corpus, f.predicted));
}

void BM_evaluate_parallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f.corpus, f.predicted));
}

void BM_stats_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(serial::corpus_stats(f.corpus));
}

void BM_stats_parallel(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(corpus_stats(f.corpus));
}

}  // namespace

BENCHMARK(BM_predict_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_evaluate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_stats_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stats_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
