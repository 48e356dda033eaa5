#include <random>
#include <set>

#include "doctest.h"
#include "dyncon/adjacency_store.hpp"

using namespace dyncon;

namespace {

constexpr EdgeKind kNT = EdgeKind::kNonTree;

std::set<EdgeId> as_set(std::span<const EdgeId> ids) { return {ids.begin(), ids.end()}; }

}  // namespace

TEST_CASE("insert then fetch in slot order") {
  AdjacencyStore store(8, 3);
  const EdgeRef edges[] = {{10, 0, 1}, {11, 0, 2}, {12, 3, 0}};
  store.insert_edges(0, 2, kNT, edges);
  CHECK(store.count(0, 2, kNT) == 3);
  CHECK(store.fetch_edges(0, 2, kNT, 3) == std::vector<EdgeId>{10, 11, 12});
  CHECK(store.fetch_edges(0, 2, kNT, 2) == std::vector<EdgeId>{10, 11});
  CHECK(store.fetch_edges(0, 2, kNT, 0).empty());
  CHECK_THROWS_AS(store.fetch_edges(0, 2, kNT, 4), std::out_of_range);
  CHECK(store.count(0, 2, EdgeKind::kTree) == 0);
  CHECK(store.count(0, 1, kNT) == 0);
  store.insert_edges(0, 2, kNT, {});
  CHECK(store.count(0, 2, kNT) == 3);
  CHECK_FALSE(store.audit());
}

TEST_CASE("insert rejects bad batches") {
  AdjacencyStore store(8, 3);
  const EdgeRef one[] = {{1, 0, 1}};
  store.insert_edges(0, 1, kNT, one);
  CHECK_THROWS_AS(store.insert_edges(0, 1, kNT, one), BatchError);
  CHECK_THROWS_AS(store.insert_edges(0, 2, EdgeKind::kTree, one), BatchError);
  const EdgeRef twice[] = {{2, 0, 5}, {2, 0, 5}};
  CHECK_THROWS_AS(store.insert_edges(0, 1, kNT, twice), BatchError);
  const EdgeRef foreign[] = {{3, 4, 5}};
  CHECK_THROWS_AS(store.insert_edges(0, 1, kNT, foreign), BatchError);
  CHECK(store.count(0, 1, kNT) == 1);
  // The other endpoint may store it, at any level.
  store.insert_edges(1, 3, kNT, one);
  CHECK(store.locate(1, 1)->level == 3);
  CHECK(store.locate(1, 0)->level == 1);
}

TEST_CASE("delete keeps arrays dense") {
  AdjacencyStore store(4, 1);
  const EdgeRef edges[] = {{0, 0, 1}, {1, 0, 2}, {2, 0, 3}};
  store.insert_edges(0, 1, kNT, edges);
  const EdgeId middle[] = {1};
  store.delete_edges(0, 1, kNT, middle);
  CHECK(store.count(0, 1, kNT) == 2);
  CHECK(as_set(store.edges(0, 1, kNT)) == std::set<EdgeId>{0, 2});
  CHECK_FALSE(store.locate(1, 0));
  CHECK(store.locate(2, 0)->slot < 2);
  CHECK_FALSE(store.audit());

  CHECK_THROWS_AS(store.delete_edges(0, 1, kNT, middle), BatchError);
  const EdgeId dup[] = {0, 0};
  CHECK_THROWS_AS(store.delete_edges(0, 1, kNT, dup), BatchError);
  const EdgeId rest[] = {2, 0};
  store.delete_edges(0, 1, kNT, rest);
  CHECK(store.count(0, 1, kNT) == 0);
  CHECK_FALSE(store.endpoints(0));
  CHECK_FALSE(store.audit());
}

TEST_CASE("capacity doubles and shrinks") {
  AdjacencyStore store(2, 1);
  std::vector<EdgeRef> edges;
  for (EdgeId e = 0; e < 33; ++e) edges.push_back({e, 0, 1});
  store.insert_edges(0, 1, kNT, edges);
  CHECK(store.capacity(0, 1, kNT) == 64);
  std::vector<EdgeId> gone;
  for (EdgeId e = 0; e < 30; ++e) gone.push_back(e);
  store.delete_edges(0, 1, kNT, gone);
  CHECK(store.count(0, 1, kNT) == 3);
  CHECK(store.capacity(0, 1, kNT) >= AdjacencyStore::kMinCapacity);
  CHECK(store.capacity(0, 1, kNT) == 32);
  CHECK_FALSE(store.audit());
}

TEST_CASE("random script matches a set model with bounded slot writes") {
  const std::size_t n = 16;
  const Level levels = 3;
  AdjacencyStore store(n, levels);
  std::mt19937_64 rng(2024);
  // Each edge id lives at one endpoint only in this test, at (x, level, kind).
  struct Key {
    VertexId x;
    Level level;
    EdgeKind kind;
  };
  std::vector<std::set<EdgeId>> model(n * levels * 2);
  auto slot = [&](VertexId x, Level level, EdgeKind kind) -> std::set<EdgeId>& {
    return model[(x * levels + level - 1) * 2 + static_cast<int>(kind)];
  };
  EdgeId next = 0;
  std::uint64_t ops = 0;
  for (int step = 0; step < 4000; ++step) {
    const VertexId x = static_cast<VertexId>(rng() % n);
    const Level level = static_cast<Level>(1 + rng() % levels);
    const EdgeKind kind = rng() % 2 ? EdgeKind::kTree : kNT;
    auto& live = slot(x, level, kind);
    if (rng() % 2 == 0 || live.empty()) {
      std::vector<EdgeRef> batch;
      const std::size_t k = 1 + rng() % 20;
      for (std::size_t j = 0; j < k; ++j) {
        const EdgeId id = next++;
        batch.push_back({id, x, static_cast<VertexId>((x + 1) % n)});
        live.insert(id);
      }
      store.insert_edges(x, level, kind, batch);
      ops += k;
    } else {
      std::vector<EdgeId> all(live.begin(), live.end());
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(1 + rng() % all.size());
      store.delete_edges(x, level, kind, all);
      for (EdgeId e : all) live.erase(e);
      ops += all.size();
    }
    REQUIRE(as_set(store.edges(x, level, kind)) == live);
    if (step % 500 == 0) REQUIRE_FALSE(store.audit());
  }
  CHECK_FALSE(store.audit());
  CHECK(store.stats().edge_ops == ops);
  CHECK(store.stats().slot_writes <= 8 * ops);
  (void)sizeof(Key);
}
