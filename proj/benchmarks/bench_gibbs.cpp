#include <benchmark/benchmark.h>

#include "koslinker/links.hpp"
#include "koslinker/plltm.hpp"
#include "koslinker/synthetic.hpp"

namespace {

using namespace koslinker;

Corpus corpus_of(std::size_t docs, std::size_t labels) {
  SyntheticSpec spec;
  spec.docs = docs;
  spec.labels_per_doc = labels;
  return generate_synthetic(spec).corpus;
}

void BM_GibbsSweep(benchmark::State& st) {
  const auto corpus = corpus_of(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
  auto s = initialize(corpus, Hyperparameters{});
  std::size_t tokens = 0;
  for (const auto& d : corpus.documents) tokens += d.words.size() + d.descriptors.size();
  for (auto _ : st) gibbs_sweep(s);
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * tokens));
}
BENCHMARK(BM_GibbsSweep)->Args({500, 2})->Args({2000, 2})->Args({2000, 5})->Unit(benchmark::kMillisecond);

void BM_LogLikelihood(benchmark::State& st) {
  const auto corpus = corpus_of(2000, 2);
  const auto s = initialize(corpus, Hyperparameters{});
  for (auto _ : st) benchmark::DoNotOptimize(log_likelihood(s));
}
BENCHMARK(BM_LogLikelihood)->Unit(benchmark::kMillisecond);

void BM_TopIndices(benchmark::State& st) {
  std::vector<double> row(static_cast<std::size_t>(st.range(0)));
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<double>((i * 7919) % 1009);
  for (auto _ : st) benchmark::DoNotOptimize(top_indices(row, 5));
}
BENCHMARK(BM_TopIndices)->Arg(200)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
