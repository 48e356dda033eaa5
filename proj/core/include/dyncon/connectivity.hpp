#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyncon/adjacency_store.hpp"
#include "dyncon/euler_tour_forest.hpp"
#include "dyncon/primitives.hpp"
#include "dyncon/types.hpp"
#include "dyncon/work_counters.hpp"

namespace dyncon {

// How replacement edges are searched for after tree-edge deletions.
//  kSimple: per-round doubling search per component, non-replacement edges
//           pushed eagerly, replacements promoted at the end of each round.
//  kInterleaved: one doubling schedule across rounds, tree edges and pushes
//           deferred to the end of the level, supercomponent sizes tracked.
enum class SearchStrategy : std::uint8_t { kSimple, kInterleaved };

const char* to_string(SearchStrategy strategy);
std::optional<SearchStrategy> parse_strategy(std::string_view name);

struct EdgeInfo {
  EdgeId id = kNoEdge;
  Level level = 0;
  bool is_tree = false;
};

struct LevelSearchResult {
  // Handle vertices of components still disconnected after this level.
  std::vector<VertexId> deactivated;
  // Replacement tree edges found at this level and below.
  std::vector<EdgeId> found;
};

enum class AuditCheck : std::uint8_t {
  kComponentSize,   // components of G_i have at most 2^i vertices
  kMinimumForest,   // the top forest is minimum w.r.t. edge levels
  kForestNesting,   // a level-l tree edge lies in exactly F_l..F_L
  kForestStructure, // tours, skip-list links, augmented sums
  kAdjacency,       // back-indices and array membership
  kLevelHistory,    // per-edge levels strictly decrease
  kPushBound,       // P <= m * L
  kDictionary,      // edge dictionary matches the live edge records
};

const char* to_string(AuditCheck check);

struct AuditFailure {
  AuditCheck check;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditFailure> failures;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

struct ConnectivityOptions {
  // Worker hint for the read-only parts of a level search; 1 runs the
  // sequential schedule. Results do not depend on it.
  unsigned threads = 1;
  // Keep a SearchEvent per component per round.
  bool trace = false;
};

// Batch-dynamic connectivity over a fixed vertex set [0, n), keeping a
// spanning forest per level over Euler tour forests. Batches are validated
// up front and either apply fully or throw BatchError without side effects.
// Not thread-safe: one batch at a time.
class DynamicConnectivity {
 public:
  DynamicConnectivity(std::size_t num_vertices, std::uint64_t seed, SearchStrategy strategy,
                      ConnectivityOptions options = {});

  std::size_t num_vertices() const { return num_vertices_; }
  Level num_levels() const { return num_levels_; }
  SearchStrategy strategy() const { return strategy_; }
  std::size_t num_edges() const { return dictionary_.size(); }

  std::vector<bool> batch_connected(std::span<const Edge> queries) const;
  void batch_insert(std::span<const Edge> edges);
  void batch_delete(std::span<const Edge> edges);

  std::optional<EdgeInfo> find_edge(VertexId u, VertexId v) const;
  // Live edges, canonical and sorted.
  std::vector<Edge> edge_list() const;
  // Levels an edge has held, oldest first.
  const std::vector<Level>& level_history(EdgeId e) const;

  const WorkCounters& counters() const { return counters_; }
  const std::vector<SearchEvent>& trace() const { return trace_; }
  const EulerTourForest& forest(Level i) const { return *forests_.at(i - 1); }
  const AdjacencyStore& adjacency() const { return *adjacency_; }

  AuditReport audit() const;

  // Level searches. The components must be pairwise disconnected in F_i once
  // `found` is linked into it; batch_delete establishes this.
  LevelSearchResult parallel_level_search(Level i, std::vector<VertexId> components,
                                          std::vector<EdgeId> found);
  LevelSearchResult interleaved_level_search(Level i, std::vector<VertexId> components,
                                             std::vector<EdgeId> found);

  // Doubling search: returns at most one replacement edge and pushes every
  // examined non-replacement edge to level i-1.
  std::vector<EdgeId> component_search(Level i, VertexId component);
  // Fixed-window search: all replacement edges among the first
  // min(window, count) non-tree endpoints; nothing is pushed.
  std::vector<EdgeId> component_search(Level i, VertexId component, std::size_t window) const;

  // Test hook: moves a live edge to a lower level, keeping arrays, counts and
  // forests consistent but bypassing the search invariants.
  void debug_relevel(VertexId u, VertexId v, Level level);

 private:
  struct EdgeRecord {
    VertexId u = 0;
    VertexId v = 0;
    Level level = 0;
    bool is_tree = false;
    bool alive = false;
    std::vector<Level> history;
  };

  EulerTourForest& level_forest(Level i) { return *forests_[i - 1]; }
  EdgeRef ref(EdgeId e) const;
  std::vector<EdgeRef> refs(std::span<const EdgeId> edges) const;
  std::vector<Edge> endpoints(std::span<const EdgeId> edges) const;
  void check_vertex(VertexId v) const;
  static std::uint64_t half_capacity(Level i);

  EdgeId allocate(VertexId u, VertexId v);
  void release(EdgeId e);
  void record_level(EdgeId e, Level level);

  bool is_replacement(Level i, EdgeId e) const;
  std::vector<EdgeId> select_forest(Level i, std::span<const EdgeId> candidates) const;
  void promote(Level i, std::span<const EdgeId> edges);
  void push_tree_edges(Level i, VertexId component);
  void push_nontree(Level i, std::span<const EdgeId> edges);
  void record_event(SearchEvent event);
  std::pair<std::vector<VertexId>, std::vector<VertexId>> split_components(
      Level i, std::span<const VertexId> components) const;
  std::vector<VertexId> dedupe_components(Level i, std::span<const VertexId> components) const;
  void count_round(Level i);
  void count_pushes(Level i, std::uint64_t count);

  std::size_t num_vertices_;
  Level num_levels_;
  SearchStrategy strategy_;
  ConnectivityOptions options_;
  std::unique_ptr<AdjacencyStore> adjacency_;
  std::vector<std::unique_ptr<EulerTourForest>> forests_;
  BatchDictionary<std::uint64_t, EdgeId> dictionary_;
  std::vector<EdgeRecord> records_;
  std::vector<EdgeId> free_records_;
  mutable WorkCounters counters_;
  std::vector<SearchEvent> trace_;
  DeletionBatchStats* current_batch_ = nullptr;
  std::uint32_t search_round_ = 0;
  std::uint64_t history_violations_ = 0;
};

}  // namespace dyncon
