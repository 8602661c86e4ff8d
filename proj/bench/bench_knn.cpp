// Indexed vs naive k-NN and parallel vs serial feature extraction.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "hammer/knn.hpp"

using namespace hammer;

namespace {

struct Data {
  std::vector<FeatureVec> features;
  std::vector<std::size_t> all;
  std::vector<FeatureVec> queries;
};

// Zipf-ish feature popularity, as in real theorem libraries.
Data make_data(std::size_t n, std::size_t dims, std::size_t per, std::size_t nq) {
  std::mt19937_64 rng(42);
  std::vector<double> w(dims);
  for (std::size_t i = 0; i < dims; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::uint32_t> pick(w.begin(), w.end());
  auto vec = [&] {
    FeatureVec v;
    for (std::size_t i = 0; i < per; ++i) v.push_back(pick(rng));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.features.push_back(vec());
    d.all.push_back(i);
  }
  for (std::size_t i = 0; i < nq; ++i) d.queries.push_back(vec());
  return d;
}

void BM_KnnIndexed(benchmark::State& st) {
  Data d = make_data(static_cast<std::size_t>(st.range(0)), 20000, 40, 64);
  FeatureIndex index(d.features, d.all);
  for (auto _ : st)
    for (const auto& q : d.queries) benchmark::DoNotOptimize(index.k_nearest(q, kDefaultK));
}

void BM_KnnNaive(benchmark::State& st) {
  Data d = make_data(static_cast<std::size_t>(st.range(0)), 20000, 40, 64);
  for (auto _ : st)
    for (const auto& q : d.queries) benchmark::DoNotOptimize(k_nearest_naive(d.features, d.all, q, kDefaultK));
}

void BM_KnnBatchParallel(benchmark::State& st) {
  Data d = make_data(static_cast<std::size_t>(st.range(0)), 20000, 40, 64);
  FeatureIndex index(d.features, d.all);
  for (auto _ : st) benchmark::DoNotOptimize(k_nearest_batch(index, d.queries, kDefaultK));
}

}  // namespace

BENCHMARK(BM_KnnIndexed)->Arg(1000)->Arg(10000);
BENCHMARK(BM_KnnNaive)->Arg(1000)->Arg(10000);
BENCHMARK(BM_KnnBatchParallel)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
