#include <random>

#include "doctest.h"
#include "dyncon/connectivity.hpp"
#include "dyncon/oracle.hpp"
#include "test_support.hpp"

using namespace dyncon;

TEST_CASE("oracle applies batches") {
  OracleGraph g(4);
  const Edge e[] = {{2, 1}};
  g.apply(BatchKind::kInsert, e);
  CHECK(g.edges() == std::set<Edge>{{1, 2}});
  g.apply(BatchKind::kDelete, e);
  CHECK(g.edges().empty());
  CHECK_THROWS_AS(g.apply(BatchKind::kDelete, e), BatchError);
  CHECK_THROWS_AS(OracleGraph(0), std::invalid_argument);
}

TEST_CASE("oracle connectivity") {
  OracleGraph g(5);
  CHECK(g.connected(3, 3));
  CHECK_FALSE(g.connected(0, 1));
  CHECK_THROWS_AS(g.connected(0, 5), std::out_of_range);
  const Edge tri[] = {{0, 1}, {1, 2}, {2, 0}};
  g.apply(BatchKind::kInsert, tri);
  CHECK(g.connected(0, 2));
  CHECK(g.components() == std::vector<VertexId>{0, 0, 0, 3, 4});
  CHECK(OracleGraph(3).components() == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("oracle rejects what the engine rejects") {
  const std::vector<std::pair<BatchKind, std::vector<Edge>>> script{
      {BatchKind::kInsert, {{0, 1}, {1, 2}}},
      {BatchKind::kInsert, {{2, 3}, {3, 2}}},
      {BatchKind::kInsert, {{4, 4}}},
      {BatchKind::kInsert, {{1, 0}}},
      {BatchKind::kInsert, {{0, 9}}},
      {BatchKind::kDelete, {{0, 1}, {0, 1}}},
      {BatchKind::kDelete, {{2, 3}}},
      {BatchKind::kDelete, {{1, 2}}},
      {BatchKind::kQuery, {{0, 9}}},
      {BatchKind::kQuery, {{0, 2}}},
  };
  OracleGraph oracle(6);
  DynamicConnectivity engine(6, 1, SearchStrategy::kInterleaved);
  for (const auto& [kind, batch] : script) {
    bool oracle_ok = true;
    bool engine_ok = true;
    try {
      oracle.apply(kind, batch);
    } catch (const BatchError&) {
      oracle_ok = false;
    }
    try {
      if (kind == BatchKind::kInsert) engine.batch_insert(batch);
      if (kind == BatchKind::kDelete) engine.batch_delete(batch);
      if (kind == BatchKind::kQuery) engine.batch_connected(batch);
    } catch (const BatchError&) {
      engine_ok = false;
    }
    CHECK(oracle_ok == engine_ok);
  }
  CHECK(engine.edge_list() == std::vector<Edge>(oracle.edges().begin(), oracle.edges().end()));
}

TEST_CASE("final edge set matches the engine dictionary") {
  OracleGraph oracle(300);
  DynamicConnectivity engine(300, 2, SearchStrategy::kSimple);
  testing::RandomUpdates updates(300, 2);
  std::size_t ops = 0;
  while (ops < 10000) {
    auto ins = updates.inserts(150);
    oracle.apply(BatchKind::kInsert, ins);
    engine.batch_insert(ins);
    auto del = updates.deletes(100);
    oracle.apply(BatchKind::kDelete, del);
    engine.batch_delete(del);
    ops += ins.size() + del.size();
  }
  CHECK(engine.edge_list() == std::vector<Edge>(oracle.edges().begin(), oracle.edges().end()));
}

TEST_CASE("partitions refine under deletions") {
  OracleGraph g(100);
  testing::RandomUpdates updates(100, 12);
  g.apply(BatchKind::kInsert, updates.inserts(150));
  auto before = g.components();
  CHECK(g.components() == before);
  for (int step = 0; step < 20; ++step) {
    g.apply(BatchKind::kDelete, updates.deletes(7));
    auto after = g.components();
    for (VertexId a = 0; a < 100; ++a) {
      for (VertexId b = 0; b < 100; ++b) {
        if (after[a] == after[b]) CHECK(before[a] == before[b]);
      }
    }
    before = after;
  }
}
