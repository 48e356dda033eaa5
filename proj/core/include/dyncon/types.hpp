#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace dyncon {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
// Levels are 1-based; 0 means "no level".
using Level = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

enum class EdgeKind : std::uint8_t { kTree = 0, kNonTree = 1 };

inline const char* to_string(EdgeKind kind) {
  return kind == EdgeKind::kTree ? "tree" : "nontree";
}

// An undirected edge or a query pair. Not necessarily canonical.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge canonical() const { return u <= v ? Edge{u, v} : Edge{v, u}; }
  bool is_self_loop() const { return u == v; }

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Order-independent 64-bit key for an undirected edge.
inline std::uint64_t edge_key(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

inline std::uint64_t edge_key(const Edge& e) { return edge_key(e.u, e.v); }

inline Edge edge_from_key(std::uint64_t key) {
  return Edge{static_cast<VertexId>(key >> 32),
              static_cast<VertexId>(key & 0xffffffffu)};
}

// Thrown when a batch violates its preconditions. The structure is left
// unchanged.
class BatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Maximum level for an n-vertex structure: max(1, ceil(log2 n)).
inline Level max_level_for(std::size_t n) {
  Level levels = 0;
  while ((std::size_t{1} << levels) < n) ++levels;
  return levels == 0 ? 1 : levels;
}

}  // namespace dyncon

template <>
struct std::hash<dyncon::Edge> {
  std::size_t operator()(const dyncon::Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) | e.v);
  }
};
