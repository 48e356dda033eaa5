#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dyncon/types.hpp"

namespace dyncon {

// One deletion batch as seen by the counters.
struct DeletionBatchStats {
  std::uint64_t size = 0;          // k_b
  std::uint64_t tree_edges = 0;    // deleted edges that were tree edges
  std::vector<std::uint64_t> pushes;  // p_{b,i}, indexed by level - 1
  std::vector<std::uint64_t> rounds;  // search rounds, indexed by level - 1
};

// Record of one component's activity in one round of a level search. Only
// kept when tracing is enabled.
struct SearchEvent {
  std::uint64_t batch = 0;  // deletion-batch ordinal
  Level level = 0;
  std::uint32_t round = 0;
  VertexId component = 0;  // handle vertex of the component
  std::uint32_t phases = 0;
  std::uint64_t window = 0;        // endpoints examined in the last phase
  std::uint64_t pushed_nontree = 0;
  std::uint64_t buffered = 0;      // endpoints removed from the level (interleaved)
  bool found_replacement = false;
  bool deactivated = false;
};

struct WorkCounters {
  std::uint64_t inserted = 0;      // m: edges ever inserted
  std::uint64_t deleted = 0;       // K
  std::uint64_t pushes = 0;        // P
  std::uint64_t tree_pushes = 0;
  std::uint64_t nontree_pushes = 0;
  std::uint64_t deletion_batches = 0;  // d
  std::uint64_t insertion_batches = 0;
  std::uint64_t query_batches = 0;
  std::uint64_t queries = 0;
  std::uint64_t repr_queries = 0;  // FindRepr calls made by searches
  std::uint64_t phases = 0;        // doubling phases (simple strategy)
  std::uint64_t promoted = 0;      // replacement edges turned into tree edges
  std::vector<std::uint64_t> rounds_per_level;  // indexed by level - 1
  std::vector<DeletionBatchStats> batches;

  // Round-to-round doubling checks made by the interleaved search.
  std::uint64_t doubling_checks = 0;
  std::uint64_t doubling_violations = 0;

  double average_deletion_batch() const {
    return deletion_batches == 0 ? 0.0
                                 : static_cast<double>(deleted) / static_cast<double>(deletion_batches);
  }
  double pushes_per_deleted_edge() const {
    return deleted == 0 ? 0.0 : static_cast<double>(pushes) / static_cast<double>(deleted);
  }
  std::uint64_t push_bound(Level levels) const { return inserted * levels; }
};

}  // namespace dyncon
