#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "dyncon/types.hpp"

namespace dyncon {

enum class BatchKind : std::uint8_t { kInsert, kDelete, kQuery };

const char* to_string(BatchKind kind);

// Reference connectivity: a plain edge set, with every answer recomputed from
// scratch by BFS. Rejects exactly the batches DynamicConnectivity rejects.
class OracleGraph {
 public:
  explicit OracleGraph(std::size_t num_vertices);

  std::size_t num_vertices() const { return num_vertices_; }
  const std::set<Edge>& edges() const { return edges_; }

  // Inserts or deletes a batch atomically; throws BatchError otherwise.
  // Query batches are checked for valid vertices and leave the set alone.
  void apply(BatchKind kind, std::span<const Edge> batch);

  // Throws std::out_of_range for an unknown vertex.
  bool connected(VertexId u, VertexId v) const;
  std::vector<bool> batch_connected(std::span<const Edge> queries) const;

  // Component label per vertex: the smallest vertex of its component.
  std::vector<VertexId> components() const;
  static std::vector<VertexId> components(std::size_t num_vertices, std::span<const Edge> edges);

 private:
  std::size_t num_vertices_;
  std::set<Edge> edges_;
};

}  // namespace dyncon
