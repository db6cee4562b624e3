#include <benchmark/benchmark.h>

#include <random>

#include "infzsl/kmeans.hpp"

using namespace infzsl;

namespace {

std::vector<PhraseEmbedding> random_embeddings(int n, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<PhraseEmbedding> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PhraseEmbedding e;
    e.concept_index = i;
    e.covered_words = 1;
    e.vector.resize(dim);
    for (int d = 0; d < dim; ++d) e.vector(d) = normal(rng);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

static void BM_KmeansFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto embeddings = random_embeddings(n, 50, 1);
  KmeansOptions opts;
  opts.k = k;
  opts.seed = 7;
  opts.max_iter = 100;
  for (auto _ : state) {
    ClusterModel model = kmeans_fit(embeddings, opts);
    benchmark::DoNotOptimize(model.inertia);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_KmeansFit)
    ->Args({500, 20})
    ->Args({2000, 50})
    ->Args({5000, 200})
    ->Unit(benchmark::kMillisecond);

static void BM_KmeansAssignOnly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto embeddings = random_embeddings(n, 50, 3);
  KmeansOptions opts;
  opts.k = 50;
  opts.seed = 11;
  opts.max_iter = 1;
  for (auto _ : state) {
    ClusterModel model = kmeans_fit(embeddings, opts);
    benchmark::DoNotOptimize(model.assignment.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_KmeansAssignOnly)->Arg(2000)->Unit(benchmark::kMillisecond);
