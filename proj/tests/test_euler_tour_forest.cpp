#include <random>
#include <set>

#include "doctest.h"
#include "dyncon/euler_tour_forest.hpp"
#include "dyncon/oracle.hpp"

using namespace dyncon;

namespace {

void expect_clean(const EulerTourForest& f) {
  auto problem = f.audit();
  INFO(problem.value_or(""));
  REQUIRE_FALSE(problem);
}

// Random forest over n vertices grown by batched links, with a mirror edge
// list for the BFS oracle.
struct RandomForest {
  EulerTourForest forest;
  std::vector<Edge> edges;
  std::mt19937_64 rng;

  RandomForest(std::size_t n, std::uint64_t seed, AdjacencyStore* store = nullptr)
      : forest(n, 1, seed, store), rng(seed) {}

  void grow(std::size_t k) {
    const std::size_t n = forest.num_vertices();
    std::vector<Edge> batch;
    for (std::size_t tries = 0; batch.size() < k && tries < 20 * k; ++tries) {
      Edge e{static_cast<VertexId>(rng() % n), static_cast<VertexId>(rng() % n)};
      if (e.is_self_loop()) continue;
      std::vector<Edge> trial = edges;
      trial.insert(trial.end(), batch.begin(), batch.end());
      auto before = OracleGraph::components(n, trial);
      if (before[e.u] == before[e.v]) continue;
      batch.push_back(e);
    }
    forest.batch_link(batch);
    edges.insert(edges.end(), batch.begin(), batch.end());
  }

  void shrink(std::size_t k) {
    std::vector<Edge> batch;
    for (std::size_t j = 0; j < k && !edges.empty(); ++j) {
      std::size_t at = rng() % edges.size();
      std::swap(edges[at], edges.back());
      batch.push_back(edges.back());
      edges.pop_back();
    }
    forest.batch_cut(batch);
  }
};

}  // namespace

TEST_CASE("link and query") {
  EulerTourForest f(4, 1, 7);
  const Edge path[] = {{1, 2}, {2, 3}};
  f.batch_link(path);
  CHECK(f.connected(1, 3));
  CHECK_FALSE(f.connected(0, 1));
  CHECK(f.connected(0, 0));
  CHECK(f.has_edge(2, 1));
  CHECK(f.num_edges() == 2);
  f.batch_link({});
  CHECK(f.num_edges() == 2);
  CHECK(f.edges() == std::vector<Edge>{{1, 2}, {2, 3}});
  expect_clean(f);
}

TEST_CASE("link rejects cycles and bad edges without changes") {
  EulerTourForest f(5, 1, 7);
  const Edge path[] = {{0, 1}, {1, 2}};
  f.batch_link(path);
  const auto before = f.fingerprint();

  const Edge closing[] = {{3, 4}, {0, 2}};
  CHECK_THROWS_AS(f.batch_link(closing), BatchError);
  const Edge joint[] = {{3, 4}, {4, 0}, {3, 2}};
  CHECK_THROWS_AS(f.batch_link(joint), BatchError);
  const Edge present[] = {{2, 1}};
  CHECK_THROWS_AS(f.batch_link(present), BatchError);
  const Edge loop[] = {{3, 3}};
  CHECK_THROWS_AS(f.batch_link(loop), BatchError);
  const Edge twice[] = {{3, 4}, {4, 3}};
  CHECK_THROWS_AS(f.batch_link(twice), BatchError);
  const Edge range[] = {{3, 5}};
  CHECK_THROWS(f.batch_link(range));

  CHECK(f.fingerprint() == before);
  CHECK_FALSE(f.connected(3, 4));
  expect_clean(f);
}

TEST_CASE("cut") {
  EulerTourForest f(5, 1, 3);
  const Edge single[] = {{0, 1}};
  f.batch_link(single);
  f.batch_cut(single);
  CHECK_FALSE(f.connected(0, 1));

  const Edge star[] = {{4, 1}, {4, 2}, {4, 3}};
  f.batch_link(star);
  CHECK(f.component_size(2) == 4);
  f.batch_cut(star);
  for (VertexId v = 1; v <= 4; ++v) CHECK(f.component_size(v) == 1);

  const Edge absent[] = {{1, 2}};
  CHECK_THROWS_AS(f.batch_cut(absent), BatchError);
  expect_clean(f);
}

TEST_CASE("representatives") {
  EulerTourForest f(6, 1, 11);
  CHECK(f.find_repr(3) == f.find_repr(3));
  CHECK(f.find_repr(3) != f.find_repr(4));
  const Edge e[] = {{1, 2}};
  f.batch_link(e);
  const VertexId vs[] = {1, 2, 5};
  auto r = f.batch_find_repr(vs);
  CHECK(r[0] == r[1]);
  CHECK(r[0] != r[2]);
  CHECK_THROWS(f.find_repr(6));
}

TEST_CASE("component sizes") {
  EulerTourForest f(6, 1, 1);
  CHECK(f.component_size(0) == 1);
  const Edge path[] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  f.batch_link(path);
  for (VertexId v = 0; v < 5; ++v) CHECK(f.component_size(v) == 5);
  CHECK(f.component_size(5) == 1);
}

TEST_CASE("edge count adjustments") {
  EulerTourForest f(4, 2, 5);
  const Edge path[] = {{0, 1}, {1, 2}};
  f.batch_link(path);
  CHECK(f.num_nontree_edges(0) == 0);
  const CountDelta plus[] = {{1, EdgeKind::kNonTree, 3}};
  f.adjust_edge_counts(plus);
  CHECK(f.num_nontree_edges(2) == 3);
  CHECK(f.vertex_value(1).nontree == 3);
  const CountDelta minus[] = {{1, EdgeKind::kNonTree, -3}};
  f.adjust_edge_counts(minus);
  CHECK(f.tree_totals(0) == AugValue{0, 0, 3});
  const CountDelta negative[] = {{2, EdgeKind::kTree, 1}, {0, EdgeKind::kTree, -1}};
  CHECK_THROWS_AS(f.adjust_edge_counts(negative), BatchError);
  CHECK(f.num_tree_edges(0) == 0);
  expect_clean(f);
}

TEST_CASE("random count deltas keep sums exact") {
  RandomForest rf(64, 21);
  rf.grow(40);
  std::vector<std::int64_t> model(64, 0);
  for (int step = 0; step < 200; ++step) {
    std::vector<CountDelta> deltas;
    for (int k = 0; k < 5; ++k) {
      const VertexId v = static_cast<VertexId>(rf.rng() % 64);
      const std::int64_t d = static_cast<std::int64_t>(rf.rng() % 7) - 2;
      if (model[v] + d < 0) continue;
      model[v] += d;
      deltas.push_back({v, EdgeKind::kNonTree, d});
    }
    // A vertex may appear twice; the net change decides.
    rf.forest.adjust_edge_counts(deltas);
    if (step % 10 == 0) {
      rf.shrink(3);
      rf.grow(3);
    }
  }
  auto label = OracleGraph::components(64, rf.edges);
  for (VertexId v = 0; v < 64; ++v) {
    std::int64_t expect = 0;
    for (VertexId x = 0; x < 64; ++x) {
      if (label[x] == label[v]) expect += model[x];
    }
    CHECK(static_cast<std::int64_t>(rf.forest.num_nontree_edges(v)) == expect);
  }
  expect_clean(rf.forest);
}

TEST_CASE("fetch follows slot order at one vertex") {
  AdjacencyStore store(4, 1);
  EulerTourForest f(4, 1, 9, &store);
  const EdgeRef edges[] = {{5, 0, 1}, {6, 0, 2}, {7, 0, 3}};
  f.add_level_edges(edges, EdgeKind::kNonTree);
  CHECK(f.fetch_level_edges(0, 0, EdgeKind::kNonTree).empty());
  CHECK(f.fetch_level_edges(0, 2, EdgeKind::kNonTree) == std::vector<EdgeId>{5, 6});
  CHECK_THROWS_AS(f.fetch_level_edges(0, 4, EdgeKind::kNonTree), std::out_of_range);
  CHECK(f.num_nontree_edges(0) == 3);
  CHECK(f.num_nontree_edges(1) == 1);
  expect_clean(f);
}

TEST_CASE("fetch needs an adjacency store") {
  EulerTourForest f(2, 1, 9);
  CHECK_THROWS_AS(f.fetch_level_edges(0, 0, EdgeKind::kTree), std::logic_error);
}

TEST_CASE("removing level edges") {
  AdjacencyStore store(6, 2);
  EulerTourForest f(6, 2, 9, &store);
  const Edge tree[] = {{0, 1}, {1, 2}};
  f.batch_link(tree);
  const EdgeRef edges[] = {{0, 0, 3}, {1, 2, 4}, {2, 1, 2}};
  f.add_level_edges(edges, EdgeKind::kNonTree);
  CHECK(f.num_nontree_edges(0) == 4);

  f.remove_level_edges(0, {}, EdgeKind::kNonTree);
  const EdgeId wrong_kind[] = {0};
  CHECK_THROWS_AS(f.remove_level_edges(0, wrong_kind, EdgeKind::kTree), BatchError);
  const EdgeId outside[] = {0};
  CHECK_THROWS_AS(f.remove_level_edges(5, outside, EdgeKind::kNonTree), BatchError);

  auto all = f.fetch_level_edges(0, 4, EdgeKind::kNonTree);
  CHECK(std::set<EdgeId>(all.begin(), all.end()) == std::set<EdgeId>{0, 1, 2});
  f.remove_level_edges(0, all, EdgeKind::kNonTree);
  CHECK(f.num_nontree_edges(0) == 0);
  CHECK(f.num_nontree_edges(3) == 0);
  CHECK(store.count(4, 2, EdgeKind::kNonTree) == 0);
  expect_clean(f);
}

TEST_CASE("random links and cuts match BFS") {
  RandomForest rf(96, 31);
  for (int step = 0; step < 300; ++step) {
    if (rf.rng() % 3 == 0) {
      rf.shrink(1 + rf.rng() % 6);
    } else {
      rf.grow(1 + rf.rng() % 6);
    }
    auto label = OracleGraph::components(96, rf.edges);
    std::vector<Edge> queries;
    std::vector<VertexId> vertices;
    for (int q = 0; q < 20; ++q) {
      queries.push_back({static_cast<VertexId>(rf.rng() % 96), static_cast<VertexId>(rf.rng() % 96)});
      vertices.push_back(queries.back().u);
      vertices.push_back(queries.back().v);
    }
    auto got = rf.forest.batch_connected(queries);
    auto reprs = rf.forest.batch_find_repr(vertices);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const bool same = label[queries[q].u] == label[queries[q].v];
      REQUIRE(got[q] == same);
      REQUIRE((reprs[2 * q] == reprs[2 * q + 1]) == same);
      REQUIRE(rf.forest.component_size(queries[q].u) ==
              static_cast<std::size_t>(std::count(label.begin(), label.end(), label[queries[q].u])));
    }
    if (step % 25 == 0) expect_clean(rf.forest);
  }
  expect_clean(rf.forest);
}

TEST_CASE("fetch returns every edge and is prefix-stable") {
  const std::size_t n = 80;
  AdjacencyStore store(n, 1);
  RandomForest rf(n, 77, &store);
  rf.grow(60);
  std::vector<EdgeRef> edges;
  for (EdgeId e = 0; e < 300; ++e) {
    VertexId a = static_cast<VertexId>(rf.rng() % n);
    VertexId b = static_cast<VertexId>(rf.rng() % n);
    if (a == b) continue;
    edges.push_back({e, a, b});
  }
  rf.forest.add_level_edges(edges, EdgeKind::kNonTree);
  for (int trial = 0; trial < 200; ++trial) {
    const VertexId v = static_cast<VertexId>(rf.rng() % n);
    const std::size_t total = rf.forest.num_nontree_edges(v);
    const std::size_t l2 = total == 0 ? 0 : rf.rng() % (total + 1);
    const std::size_t l1 = l2 == 0 ? 0 : rf.rng() % (l2 + 1);
    auto a = rf.forest.fetch_level_edges(v, l1, EdgeKind::kNonTree);
    auto b = rf.forest.fetch_level_edges(v, l2, EdgeKind::kNonTree);
    REQUIRE(a.size() <= b.size());
    CHECK(std::equal(a.begin(), a.end(), b.begin()));

    auto full = rf.forest.fetch_level_edges(v, total, EdgeKind::kNonTree);
    std::set<EdgeId> expect;
    for (const EdgeRef& r : edges) {
      if (rf.forest.connected(r.u, v) || rf.forest.connected(r.v, v)) expect.insert(r.id);
    }
    CHECK(std::set<EdgeId>(full.begin(), full.end()) == expect);
    CHECK(full.size() == expect.size());
  }
}

TEST_CASE("same seed, same structure") {
  auto build = [](std::uint64_t seed) {
    RandomForest rf(50, seed);
    for (int k = 0; k < 10; ++k) {
      rf.grow(5);
      rf.shrink(2);
    }
    return rf.forest.fingerprint();
  };
  CHECK(build(4) == build(4));
  CHECK(build(4) != build(5));
}
