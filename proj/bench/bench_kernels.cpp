// OpenMP kernels against their serial references, plus size scaling.
//   bench_kernels --benchmark_filter=Access

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "commscape/community.hpp"
#include "commscape/kmeans.hpp"
#include "commscape/parallel.hpp"
#include "commscape/planted.hpp"
#include "commscape/similarity.hpp"

using namespace commscape;

namespace {

Graph bench_graph(std::size_t n) {
  const std::size_t size = 20;
  return planted_partition(n / size, size, 0.5, 0.01, 1).graph;
}

PointSet bench_points(std::size_t n, std::size_t d, std::size_t blobs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> centre(-20.0, 20.0);
  std::vector<double> centres(blobs * d);
  for (double& c : centres) c = centre(rng);
  std::vector<double> v;
  v.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) v.push_back(centres[(i % blobs) * d + j] + noise(rng));
  }
  return PointSet(d, std::move(v));
}

void threads_from(const benchmark::State& state, int arg) {
  parallel::set_thread_count(static_cast<int>(state.range(arg)));
}

// Similarity: all-pairs feature spacing, serial enumeration vs parallel DP.

void BM_FeatureSpacingReference(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<std::size_t>(state.range(0)));
  const WeightScheme ws = default_weights(3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::feature_spacing_matrix(g, ws));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FeatureSpacingReference)->Arg(60)->Arg(120)->Arg(240)->Unit(benchmark::kMillisecond);

void BM_FeatureSpacing(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<std::size_t>(state.range(0)));
  const WeightScheme ws = default_weights(3);
  threads_from(state, 1);
  for (auto _ : state) benchmark::DoNotOptimize(feature_spacing_matrix(g, ws));
  parallel::set_thread_count(0);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FeatureSpacing)
    ->ArgsProduct({{60, 120, 240, 480, 960}, {1, 0}})
    ->ArgNames({"n", "threads"})
    ->Unit(benchmark::kMillisecond);

void BM_AccessLandmarks(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<std::size_t>(state.range(0)));
  const WeightScheme ws = default_weights(4);
  const auto ids = select_landmarks(g, kDefaultLandmarks, 0);
  std::vector<NodeIndex> cols;
  for (NodeId id : ids) cols.push_back(g.index_of(id));
  threads_from(state, 1);
  for (auto _ : state) benchmark::DoNotOptimize(access_matrix(g, ws, cols));
  parallel::set_thread_count(0);
}
BENCHMARK(BM_AccessLandmarks)
    ->ArgsProduct({{1000, 4000}, {1, 0}})
    ->ArgNames({"n", "threads"})
    ->Unit(benchmark::kMillisecond);

// Assignment step.

void BM_AssignReference(benchmark::State& state) {
  const PointSet ps = bench_points(static_cast<std::size_t>(state.range(0)), 16, 8);
  const Centroids c = seed_centroids(ps, 16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::assign(ps, c));
}
BENCHMARK(BM_AssignReference)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Assign(benchmark::State& state) {
  const PointSet ps = bench_points(static_cast<std::size_t>(state.range(0)), 16, 8);
  const Centroids c = seed_centroids(ps, 16, 1);
  threads_from(state, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assign(ps, c));
  parallel::set_thread_count(0);
}
BENCHMARK(BM_Assign)
    ->ArgsProduct({{10000, 100000}, {1, 0}})
    ->ArgNames({"n", "threads"})
    ->Unit(benchmark::kMillisecond);

// Whole k-means runs from the same seeding.

void BM_Lloyd(benchmark::State& state) {
  const PointSet ps = bench_points(static_cast<std::size_t>(state.range(0)), 8, 40);
  const Centroids init = seed_centroids(ps, 10, 2);
  for (auto _ : state) {
    const KMeansResult r = lloyd_kmeans(ps, init, 300);
    state.counters["iterations"] = r.iterations;
  }
}
BENCHMARK(BM_Lloyd)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_Pruned(benchmark::State& state) {
  const PointSet ps = bench_points(static_cast<std::size_t>(state.range(0)), 8, 40);
  const Centroids init = seed_centroids(ps, 10, 2);
  const double width = default_width(ps, 10);
  for (auto _ : state) {
    const KMeansResult r = pruned_kmeans(ps, init, width, 300);
    state.counters["iterations"] = r.iterations;
    state.counters["visit_share"] =
        static_cast<double>(r.total_visits()) / static_cast<double>(ps.size() * static_cast<std::size_t>(r.iterations));
  }
}
BENCHMARK(BM_Pruned)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

// End to end detection at growing sizes.

void BM_Detect(benchmark::State& state) {
  const Graph g = bench_graph(static_cast<std::size_t>(state.range(0)));
  DetectConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(detect_communities(g, config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Detect)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace

BENCHMARK_MAIN();
