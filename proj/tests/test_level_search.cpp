#include "doctest.h"
#include "dyncon/connectivity.hpp"
#include "dyncon/oracle.hpp"
#include "test_support.hpp"

using namespace dyncon;

namespace {

constexpr SearchStrategy kBoth[] = {SearchStrategy::kSimple, SearchStrategy::kInterleaved};

void expect_clean(const DynamicConnectivity& g) {
  const AuditReport report = g.audit();
  INFO(report.summary());
  REQUIRE(report.ok());
}

// Path 0..8, a bridge (0,9), path 9..63, then seven chords at vertex 0 and
// one edge (5,10) that can replace the bridge.
DynamicConnectivity chord_fan(SearchStrategy strategy) {
  DynamicConnectivity g(64, 1, strategy, {.trace = true});
  std::vector<Edge> tree;
  for (VertexId v = 0; v < 8; ++v) tree.push_back({v, v + 1});
  tree.push_back({0, 9});
  for (VertexId v = 9; v < 63; ++v) tree.push_back({v, v + 1});
  g.batch_insert(tree);
  std::vector<Edge> chords;
  for (VertexId v = 2; v <= 8; ++v) chords.push_back({0, v});
  chords.push_back({5, 10});
  g.batch_insert(chords);
  return g;
}

}  // namespace

TEST_CASE("doubling search finds the replacement after seven pushes") {
  DynamicConnectivity g = chord_fan(SearchStrategy::kSimple);
  REQUIRE(g.num_levels() == 6);
  const Edge bridge[] = {{0, 9}};
  g.batch_delete(bridge);

  const WorkCounters& c = g.counters();
  CHECK(c.phases == 4);
  CHECK(c.nontree_pushes == 7);
  CHECK(c.tree_pushes == 8);
  CHECK(c.pushes == 15);
  CHECK(c.promoted == 1);
  CHECK(c.batches.back().pushes[5] == 15);
  CHECK(c.batches.back().rounds[5] == 1);
  REQUIRE(g.trace().size() == 1);
  CHECK(g.trace()[0].phases == 4);
  CHECK(g.trace()[0].window == 1);
  CHECK(g.trace()[0].pushed_nontree == 7);
  CHECK(g.trace()[0].found_replacement);

  auto rep = g.find_edge(5, 10);
  CHECK(rep->is_tree);
  CHECK(rep->level == 6);
  for (VertexId v = 2; v <= 8; ++v) CHECK(g.find_edge(0, v)->level == 5);
  for (VertexId v = 0; v < 8; ++v) CHECK(g.find_edge(v, v + 1)->level == 5);
  const Edge q[] = {{0, 63}};
  CHECK(g.batch_connected(q) == std::vector<bool>{true});
  expect_clean(g);
}

TEST_CASE("interleaved search on the same instance") {
  DynamicConnectivity g = chord_fan(SearchStrategy::kInterleaved);
  const Edge bridge[] = {{0, 9}};
  g.batch_delete(bridge);
  const WorkCounters& c = g.counters();
  CHECK(c.nontree_pushes == 7);
  CHECK(c.tree_pushes == 8);
  CHECK(c.rounds_per_level[5] == 4);
  CHECK(c.doubling_checks == 3);
  CHECK(c.doubling_violations == 0);
  std::vector<std::uint64_t> buffered;
  for (const SearchEvent& e : g.trace()) buffered.push_back(e.buffered);
  CHECK(buffered == std::vector<std::uint64_t>{2, 4, 8, 0});
  CHECK(g.trace().back().deactivated);
  CHECK(g.find_edge(5, 10)->is_tree);
  for (VertexId v = 2; v <= 8; ++v) CHECK(g.find_edge(0, v)->level == 5);
  const Edge q[] = {{0, 63}};
  CHECK(g.batch_connected(q) == std::vector<bool>{true});
  expect_clean(g);
}

TEST_CASE("a single replacement reconnects two small pieces") {
  for (auto strategy : kBoth) {
    CAPTURE(to_string(strategy));
    DynamicConnectivity g(4, 2, strategy, {.trace = true});
    const Edge edges[] = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    g.batch_insert(edges);
    REQUIRE_FALSE(g.find_edge(0, 3)->is_tree);
    const Edge del[] = {{1, 2}};
    g.batch_delete(del);
    CHECK(g.counters().rounds_per_level[1] == 1);
    CHECK(g.counters().promoted == 1);
    for (const SearchEvent& e : g.trace()) {
      CHECK(e.phases == 1);
      CHECK(e.found_replacement);
    }
    CHECK(g.find_edge(0, 3)->is_tree);
    const Edge q[] = {{1, 2}};
    CHECK(g.batch_connected(q) == std::vector<bool>{true});
    expect_clean(g);
  }
}

TEST_CASE("an exhausted component pushes everything and retires") {
  for (auto strategy : kBoth) {
    CAPTURE(to_string(strategy));
    DynamicConnectivity g(8, 3, strategy, {.trace = true});
    std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    g.batch_insert(edges);
    const Edge chords[] = {{0, 2}, {0, 3}, {1, 3}};
    g.batch_insert(chords);
    const Edge del[] = {{3, 4}};
    g.batch_delete(del);
    if (strategy == SearchStrategy::kSimple) {
      for (const Edge& e : chords) CHECK(g.find_edge(e.u, e.v)->level == 2);
      CHECK(g.counters().nontree_pushes == 3);
    }
    CHECK(g.counters().promoted == 0);
    CHECK(g.trace().back().deactivated);
    const Edge q[] = {{0, 7}, {0, 3}, {4, 7}};
    CHECK(g.batch_connected(q) == std::vector<bool>{false, true, true});
    expect_clean(g);
  }
}

TEST_CASE("two split components on eight vertices") {
  for (auto strategy : kBoth) {
    CAPTURE(to_string(strategy));
    DynamicConnectivity g(8, 4, strategy);
    OracleGraph oracle(8);
    const Edge path[] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    const Edge chords[] = {{2, 4}, {0, 2}, {4, 6}, {1, 5}, {5, 7}};
    for (auto batch : {std::span<const Edge>(path), std::span<const Edge>(chords)}) {
      g.batch_insert(batch);
      oracle.apply(BatchKind::kInsert, batch);
    }
    const Edge del[] = {{1, 2}, {5, 6}};
    g.batch_delete(del);
    oracle.apply(BatchKind::kDelete, del);
    std::vector<Edge> all;
    for (VertexId a = 0; a < 8; ++a) {
      for (VertexId b = 0; b < 8; ++b) all.push_back({a, b});
    }
    CHECK(g.batch_connected(all) == oracle.batch_connected(all));
    // The middle piece examines (2,4) first; it joins nothing new.
    if (strategy == SearchStrategy::kSimple) CHECK(g.find_edge(2, 4)->level == 2);
    expect_clean(g);
  }
}

TEST_CASE("fixed-window search") {
  DynamicConnectivity g(8, 6, SearchStrategy::kSimple);
  const Edge edges[] = {{0, 1}, {1, 2}, {0, 2}, {4, 5}};
  g.batch_insert(edges);
  CHECK(g.component_search(3, 6, 4).empty());
  CHECK(g.component_search(3, 0, 2).empty());
  // At level 1 no tree edges join 0 and 2, so (0,2) is a replacement there.
  g.debug_relevel(0, 2, 1);
  CHECK(g.component_search(1, 0, 1) == std::vector<EdgeId>{g.find_edge(0, 2)->id});
  CHECK(g.component_search(1, 0, 100) == std::vector<EdgeId>{g.find_edge(0, 2)->id});
  CHECK(g.counters().pushes == 0);
}

TEST_CASE("strategies agree on random deletion-heavy streams") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    CAPTURE(seed);
    DynamicConnectivity simple(64, seed, SearchStrategy::kSimple);
    DynamicConnectivity inter(64, seed, SearchStrategy::kInterleaved, {.trace = true});
    testing::RandomUpdates updates(64, seed);
    for (int round = 0; round < 40; ++round) {
      auto ins = updates.inserts(40);
      simple.batch_insert(ins);
      inter.batch_insert(ins);
      auto del = updates.deletes(35);
      simple.batch_delete(del);
      inter.batch_delete(del);
      auto q = updates.queries(64);
      REQUIRE(simple.batch_connected(q) == inter.batch_connected(q));
    }
    expect_clean(simple);
    expect_clean(inter);

    // A component that stays active after round r removed its whole window
    // of 2^r endpoints from the level in that round.
    CHECK(inter.counters().doubling_violations == 0);
    for (const SearchEvent& e : inter.trace()) {
      if (!e.deactivated) CHECK(e.buffered >= (std::uint64_t{1} << e.round));
    }
  }
}
