#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include <benchmark/benchmark.h>

#include "dyncon/connectivity.hpp"
#include "dyncon/euler_tour_forest.hpp"

using namespace dyncon;

namespace {

std::vector<Edge> random_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Edge> seen;
  std::vector<Edge> out;
  while (out.size() < m) {
    const Edge e = Edge{static_cast<VertexId>(rng() % n), static_cast<VertexId>(rng() % n)}.canonical();
    if (!e.is_self_loop() && seen.insert(e).second) out.push_back(e);
  }
  return out;
}

SearchStrategy strategy_of(const benchmark::State& state) {
  return state.range(1) == 0 ? SearchStrategy::kSimple : SearchStrategy::kInterleaved;
}

// Inserts m = 4n edges, then deletes them all in batches of the given size.
void BM_Teardown(benchmark::State& state) {
  const std::size_t n = 2048, m = 4 * n;
  const auto batch = static_cast<std::size_t>(state.range(0));
  std::vector<Edge> edges = random_edges(n, m, 1);
  std::vector<Edge> order = edges;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(2));
  std::uint64_t pushes = 0;
  for (auto _ : state) {
    state.PauseTiming();
    DynamicConnectivity g(n, 3, strategy_of(state));
    g.batch_insert(edges);
    state.ResumeTiming();
    for (std::size_t at = 0; at < order.size(); at += batch) {
      const std::size_t end = std::min(order.size(), at + batch);
      g.batch_delete(std::span<const Edge>(order.data() + at, end - at));
    }
    pushes = g.counters().pushes;
  }
  state.counters["pushes_per_edge"] = static_cast<double>(pushes) / static_cast<double>(m);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * m));
}
BENCHMARK(BM_Teardown)
    ->ArgsProduct({{1, 16, 256, 2048}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_Insert(benchmark::State& state) {
  const std::size_t n = 4096;
  const auto batch = static_cast<std::size_t>(state.range(0));
  const std::vector<Edge> edges = random_edges(n, 4 * n, 4);
  for (auto _ : state) {
    DynamicConnectivity g(n, 5, SearchStrategy::kSimple);
    for (std::size_t at = 0; at < edges.size(); at += batch) {
      const std::size_t end = std::min(edges.size(), at + batch);
      g.batch_insert(std::span<const Edge>(edges.data() + at, end - at));
    }
    benchmark::DoNotOptimize(g.num_edges());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * edges.size()));
}
BENCHMARK(BM_Insert)->Arg(1)->Arg(64)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Query(benchmark::State& state) {
  const std::size_t n = 4096;
  DynamicConnectivity g(n, 6, SearchStrategy::kSimple);
  g.batch_insert(random_edges(n, n, 7));
  const std::vector<Edge> queries = random_edges(n, static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(g.batch_connected(queries));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * queries.size()));
}
BENCHMARK(BM_Query)->Arg(1)->Arg(256)->Arg(4096);

void BM_LinkCut(benchmark::State& state) {
  const std::size_t n = 1 << 14;
  std::vector<Edge> path;
  for (VertexId v = 0; v + 1 < n; ++v) path.push_back({v, v + 1});
  std::vector<Edge> order = path;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(9));
  for (auto _ : state) {
    EulerTourForest f(n, 1, 10);
    f.batch_link(order);
    f.batch_cut(order);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 2 * path.size()));
}
BENCHMARK(BM_LinkCut)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
