#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyncon/types.hpp"

namespace dyncon {

// An edge together with its endpoints, as handed to the adjacency store.
struct EdgeRef {
  EdgeId id = kNoEdge;
  VertexId u = 0;
  VertexId v = 0;
};

// Per-(vertex, level, kind) dense edge arrays. Each stored edge remembers its
// slot in the array of each endpoint, so a batch of l deletions costs O(l)
// amortized slot writes.
class AdjacencyStore {
 public:
  struct Location {
    Level level = 0;
    EdgeKind kind = EdgeKind::kTree;
    std::uint32_t slot = 0;
  };

  struct Stats {
    // Every write of an edge id into a slot, including copies on resize.
    std::uint64_t slot_writes = 0;
    // Edges inserted plus edges deleted.
    std::uint64_t edge_ops = 0;
  };

  static constexpr std::size_t kMinCapacity = 4;

  AdjacencyStore(std::size_t num_vertices, Level num_levels);

  std::size_t num_vertices() const { return num_vertices_; }
  Level num_levels() const { return num_levels_; }

  // Appends `edges` to the array of x. Throws BatchError if an edge is
  // already stored at x, or x is not one of its endpoints.
  void insert_edges(VertexId x, Level level, EdgeKind kind, std::span<const EdgeRef> edges);

  // Removes `edges` from the array of x, keeping it dense. Throws BatchError
  // if any edge is missing from that array or listed twice.
  void delete_edges(VertexId x, Level level, EdgeKind kind, std::span<const EdgeId> edges);

  // The first l edges in slot order. Throws std::out_of_range if l > count.
  std::vector<EdgeId> fetch_edges(VertexId x, Level level, EdgeKind kind, std::size_t l) const;

  // Live slots of one array.
  std::span<const EdgeId> edges(VertexId x, Level level, EdgeKind kind) const;
  std::size_t count(VertexId x, Level level, EdgeKind kind) const;
  std::size_t capacity(VertexId x, Level level, EdgeKind kind) const;

  // Endpoints recorded for e while it is stored anywhere.
  std::optional<Edge> endpoints(EdgeId e) const;

  // Where edge e is stored in the array of its endpoint x, if anywhere.
  std::optional<Location> locate(EdgeId e, VertexId x) const;

  const Stats& stats() const { return stats_; }

  // Checks density and back-index consistency of every array. Returns the
  // first violation found.
  std::optional<std::string> audit() const;

 private:
  struct Array {
    std::vector<EdgeId> slots;  // size() is the capacity
    std::uint32_t count = 0;
  };

  struct Entry {
    VertexId u = 0;
    VertexId v = 0;
    Location at[2]{};  // level == 0 means absent
  };

  std::size_t array_index(VertexId x, Level level, EdgeKind kind) const;
  const Array* find_array(VertexId x, Level level, EdgeKind kind) const;
  Array& array(VertexId x, Level level, EdgeKind kind);
  int side_of(EdgeId e, VertexId x) const;
  void check_key(VertexId x, Level level) const;
  void resize(Array& a, std::size_t capacity);
  void place(Array& a, std::uint32_t slot, EdgeId e, VertexId x);

  std::size_t num_vertices_;
  Level num_levels_;
  std::vector<Array> arrays_;
  std::vector<Entry> entries_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  Stats stats_;
};

}  // namespace dyncon
