#include <benchmark/benchmark.h>

#include <random>

#include "infzsl/cess.hpp"

using namespace infzsl;

namespace {

// Row-normalized co-occurrence fractions at benchmark-dataset shapes.
CooccurrenceMatrix random_cooccurrence(int classes, int clusters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  Eigen::MatrixXd o(classes, clusters);
  for (int y = 0; y < classes; ++y) {
    double total = 0.0;
    for (int q = 0; q < clusters; ++q) {
      o(y, q) = weight(rng);
      total += o(y, q);
    }
    o.row(y) /= total;
  }
  return {std::move(o)};
}

}  // namespace

static void BM_ClusterStats(benchmark::State& state) {
  const int classes = static_cast<int>(state.range(0));
  const int clusters = static_cast<int>(state.range(1));
  CooccurrenceMatrix co = random_cooccurrence(classes, clusters, 17);
  for (auto _ : state) {
    ClusterStats stats = compute_cluster_stats(co, 3);
    benchmark::DoNotOptimize(stats.importance.data());
  }
  state.SetItemsProcessed(state.iterations() * clusters);
}
// 50x200, 200x500 and 717x200 mirror the usual class/cluster scales
BENCHMARK(BM_ClusterStats)
    ->Args({50, 200})
    ->Args({200, 500})
    ->Args({717, 200})
    ->Unit(benchmark::kMicrosecond);

static void BM_ImportanceSelect(benchmark::State& state) {
  const int clusters = static_cast<int>(state.range(0));
  ClusterStats stats = compute_cluster_stats(random_cooccurrence(200, clusters, 19), 3);
  SelectionConfig cfg{clusters, clusters / 3, 3};
  for (auto _ : state) {
    std::vector<int> selected = importance_and_select(stats, cfg);
    benchmark::DoNotOptimize(selected.data());
  }
}
BENCHMARK(BM_ImportanceSelect)->Arg(500)->Arg(5000);
