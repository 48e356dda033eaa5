#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dyncon/adjacency_store.hpp"
#include "dyncon/types.hpp"

namespace dyncon {

// Augmented value carried by tour nodes. Edge counts are charged to vertex
// loop nodes only; arc nodes carry zeros.
struct AugValue {
  std::int64_t nontree = 0;
  std::int64_t tree = 0;
  std::int64_t vertices = 0;

  std::int64_t count(EdgeKind kind) const { return kind == EdgeKind::kTree ? tree : nontree; }

  AugValue& operator+=(const AugValue& o) {
    nontree += o.nontree;
    tree += o.tree;
    vertices += o.vertices;
    return *this;
  }
  friend AugValue operator+(AugValue a, const AugValue& b) { return a += b; }
  friend bool operator==(const AugValue&, const AugValue&) = default;
};

struct CountDelta {
  VertexId vertex = 0;
  EdgeKind kind = EdgeKind::kNonTree;
  std::int64_t delta = 0;
};

// Identity of a tour's top-most skip-list node. Valid until the next
// mutation of the forest.
using ReprId = std::uint32_t;

// One forest level: every tree is stored as its Euler tour in a circular
// skip list whose nodes carry per-height sums of AugValue. Batches are
// applied as sequences of splices; each public batch call leaves all sums
// consistent.
//
// When an AdjacencyStore is attached, the per-vertex counts mirror that
// store's arrays at this forest's level, and edge fetches read from it.
class EulerTourForest {
 public:
  static constexpr int kMaxHeight = 32;

  EulerTourForest(std::size_t num_vertices, Level level, std::uint64_t seed,
                  AdjacencyStore* adjacency = nullptr);

  EulerTourForest(const EulerTourForest&) = delete;
  EulerTourForest& operator=(const EulerTourForest&) = delete;
  EulerTourForest(EulerTourForest&&) = default;
  EulerTourForest& operator=(EulerTourForest&&) = default;

  std::size_t num_vertices() const { return num_vertices_; }
  Level level() const { return level_; }
  std::size_t num_edges() const { return arcs_.size() / 2; }

  // Throws BatchError when an edge is already present, is a self-loop, or the
  // batch would close a cycle. Nothing is modified in that case.
  void batch_link(std::span<const Edge> edges);
  // Throws BatchError when an edge is not in the forest (or listed twice).
  void batch_cut(std::span<const Edge> edges);

  std::vector<bool> batch_connected(std::span<const Edge> queries) const;
  std::vector<ReprId> batch_find_repr(std::span<const VertexId> vertices) const;
  ReprId find_repr(VertexId v) const;
  bool connected(VertexId u, VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const;

  // Sum of AugValue over the tree containing v.
  AugValue tree_totals(VertexId v) const;
  std::size_t component_size(VertexId v) const;
  std::size_t num_nontree_edges(VertexId v) const;
  std::size_t num_tree_edges(VertexId v) const;
  std::size_t edge_count(VertexId v, EdgeKind kind) const;

  // Charged count at a single vertex loop.
  AugValue vertex_value(VertexId v) const;

  // Throws BatchError (and leaves the forest unchanged) when a count would
  // become negative.
  void adjust_edge_counts(std::span<const CountDelta> deltas);

  // Walks the first l charged edge endpoints of the given kind in the tree
  // of v, starting at v's loop and following the tour, and returns the
  // distinct edges among them in first-seen order. Within one vertex the
  // adjacency slot order is used. Requires an attached adjacency store.
  // Throws std::out_of_range when l exceeds the tree-wide count.
  std::vector<EdgeId> fetch_level_edges(VertexId v, std::size_t l, EdgeKind kind) const;

  // Stores edges in the adjacency arrays of both endpoints at this level and
  // charges their counts.
  void add_level_edges(std::span<const EdgeRef> edges, EdgeKind kind);

  // Removes level edges of the tree containing v from the adjacency arrays
  // of both endpoints and uncharges them. Throws BatchError when an edge is
  // not stored at this level with this kind, or lies outside v's tree.
  void remove_level_edges(VertexId v, std::span<const EdgeId> edges, EdgeKind kind);
  // Same, for edges anywhere in the forest.
  void remove_level_edges(std::span<const EdgeId> edges, EdgeKind kind);

  // Forest edges, canonical and sorted.
  std::vector<Edge> edges() const;

  // Full structural check: tour validity, skip-list links, every
  // augmented sum, and (with an adjacency store) charged counts.
  std::optional<std::string> audit() const;

  // Hash over node heights and the tour order; equal for equal seeds and
  // equal operation histories.
  std::uint64_t fingerprint() const;

 private:
  using NodeId = std::uint32_t;
  static constexpr NodeId kNil = 0xffffffffu;

  struct Link {
    NodeId next = kNil;
    NodeId prev = kNil;
    AugValue sum{};
  };

  struct Node {
    VertexId from = 0;
    VertexId to = 0;
    std::vector<Link> links;  // links.size() is the height; empty when free

    bool is_loop() const { return from == to; }
    int height() const { return static_cast<int>(links.size()); }
  };

  struct Dirty {
    std::vector<std::pair<NodeId, int>> relinked;
    std::vector<NodeId> rebased;
  };

  static std::uint64_t arc_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  void check_vertex(VertexId v) const;
  int draw_height();
  NodeId new_arc(VertexId a, VertexId b);
  void free_node(NodeId x);

  NodeId climb_left(NodeId x, int j) const;
  NodeId climb_right(NodeId x, int j) const;
  void split_after(NodeId x, Dirty& dirty);
  void join(NodeId left_tail, NodeId right_head, Dirty& dirty);
  NodeId parent_at(NodeId x, int j) const;
  void recompute(NodeId x, int j);
  void repair(Dirty& dirty);

  void link_one(VertexId u, VertexId v, Dirty& dirty);
  void cut_one(VertexId u, VertexId v, Dirty& dirty);

  // Top-most level of the tour containing x and one node on it.
  std::pair<NodeId, int> top_of(NodeId x) const;

  void collect(NodeId x, int j, EdgeKind kind,
               std::vector<std::pair<VertexId, std::size_t>>& takes) const;

  std::size_t num_vertices_;
  Level level_;
  AdjacencyStore* adjacency_;
  std::mt19937_64 rng_;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::unordered_map<std::uint64_t, NodeId> arcs_;
};

}  // namespace dyncon
