#include "dyncon/adjacency_store.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dyncon {

AdjacencyStore::AdjacencyStore(std::size_t num_vertices, Level num_levels)
    : num_vertices_(num_vertices),
      num_levels_(num_levels),
      arrays_(num_vertices * num_levels * 2) {}

std::size_t AdjacencyStore::array_index(VertexId x, Level level, EdgeKind kind) const {
  return (static_cast<std::size_t>(x) * num_levels_ + (level - 1)) * 2 +
         static_cast<std::size_t>(kind);
}

void AdjacencyStore::check_key(VertexId x, Level level) const {
  if (x >= num_vertices_) throw std::out_of_range("adjacency store: vertex out of range");
  if (level < 1 || level > num_levels_) {
    throw std::out_of_range("adjacency store: level out of range");
  }
}

const AdjacencyStore::Array* AdjacencyStore::find_array(VertexId x, Level level,
                                                        EdgeKind kind) const {
  check_key(x, level);
  return &arrays_[array_index(x, level, kind)];
}

AdjacencyStore::Array& AdjacencyStore::array(VertexId x, Level level, EdgeKind kind) {
  check_key(x, level);
  return arrays_[array_index(x, level, kind)];
}

int AdjacencyStore::side_of(EdgeId e, VertexId x) const {
  if (e >= entries_.size()) return -1;
  const Entry& entry = entries_[e];
  if (entry.u == x) return 0;
  if (entry.v == x) return 1;
  return -1;
}

void AdjacencyStore::resize(Array& a, std::size_t capacity) {
  std::vector<EdgeId> next(capacity, kNoEdge);
  std::copy_n(a.slots.begin(), a.count, next.begin());
  stats_.slot_writes += a.count;
  a.slots = std::move(next);
}

void AdjacencyStore::place(Array& a, std::uint32_t slot, EdgeId e, VertexId x) {
  a.slots[slot] = e;
  ++stats_.slot_writes;
  entries_[e].at[side_of(e, x)].slot = slot;
}

void AdjacencyStore::insert_edges(VertexId x, Level level, EdgeKind kind,
                                  std::span<const EdgeRef> edges) {
  if (edges.empty()) return;
  Array& a = array(x, level, kind);

  ++epoch_;
  for (const EdgeRef& ref : edges) {
    if (ref.id == kNoEdge) throw BatchError("adjacency store: invalid edge id");
    if (ref.u != x && ref.v != x) throw BatchError("adjacency store: vertex is not an endpoint");
    if (ref.id < entries_.size()) {
      const Entry& entry = entries_[ref.id];
      bool known = entry.at[0].level != 0 || entry.at[1].level != 0;
      if (known && !((entry.u == ref.u && entry.v == ref.v) ||
                     (entry.u == ref.v && entry.v == ref.u))) {
        throw BatchError("adjacency store: edge id reused with different endpoints");
      }
      int side = known ? side_of(ref.id, x) : (ref.u == x ? 0 : 1);
      if (known && entry.at[side].level != 0) {
        throw BatchError("adjacency store: edge already stored at this vertex");
      }
    }
    if (ref.id >= stamp_.size()) stamp_.resize(static_cast<std::size_t>(ref.id) + 1, 0);
    if (stamp_[ref.id] == epoch_) throw BatchError("adjacency store: duplicate edge in batch");
    stamp_[ref.id] = epoch_;
  }

  std::size_t need = a.count + edges.size();
  if (need > a.slots.size()) {
    std::size_t cap = std::max(kMinCapacity, a.slots.size());
    while (cap < need) cap *= 2;
    resize(a, cap);
  }
  for (const EdgeRef& ref : edges) {
    if (ref.id >= entries_.size()) entries_.resize(static_cast<std::size_t>(ref.id) + 1);
    Entry& entry = entries_[ref.id];
    if (entry.at[0].level == 0 && entry.at[1].level == 0) {
      entry.u = ref.u;
      entry.v = ref.v;
    }
    int side = side_of(ref.id, x);
    entry.at[side] = Location{level, kind, a.count};
    place(a, a.count, ref.id, x);
    ++a.count;
  }
  stats_.edge_ops += edges.size();
}

void AdjacencyStore::delete_edges(VertexId x, Level level, EdgeKind kind,
                                  std::span<const EdgeId> edges) {
  if (edges.empty()) return;
  Array& a = array(x, level, kind);

  ++epoch_;
  for (EdgeId e : edges) {
    int side = side_of(e, x);
    if (side < 0) throw BatchError("adjacency store: edge not stored at this vertex");
    const Location& at = entries_[e].at[side];
    if (at.level != level || at.kind != kind) {
      throw BatchError("adjacency store: edge not present in this array");
    }
    if (stamp_[e] == epoch_) throw BatchError("adjacency store: duplicate edge in batch");
    stamp_[e] = epoch_;
  }

  // Compact the last l slots, then fill the holes left below them with the
  // survivors of that tail window.
  const std::uint32_t l = static_cast<std::uint32_t>(edges.size());
  const std::uint32_t tail = a.count - l;
  std::uint32_t write = tail;
  for (std::uint32_t s = tail; s < a.count; ++s) {
    EdgeId e = a.slots[s];
    if (stamp_[e] == epoch_) continue;
    if (s != write) place(a, write, e, x);
    ++write;
  }
  std::uint32_t survivor = tail;
  for (EdgeId e : edges) {
    std::uint32_t slot = entries_[e].at[side_of(e, x)].slot;
    if (slot < tail) place(a, slot, a.slots[survivor++], x);
  }
  for (EdgeId e : edges) entries_[e].at[side_of(e, x)] = Location{};
  a.count = tail;
  stats_.edge_ops += l;

  if (a.slots.size() > kMinCapacity && a.count * 4 <= a.slots.size()) {
    resize(a, std::max(kMinCapacity, a.slots.size() / 2));
  }
}

std::vector<EdgeId> AdjacencyStore::fetch_edges(VertexId x, Level level, EdgeKind kind,
                                                std::size_t l) const {
  const Array* a = find_array(x, level, kind);
  if (l > a->count) throw std::out_of_range("adjacency store: fetch beyond array count");
  return {a->slots.begin(), a->slots.begin() + static_cast<std::ptrdiff_t>(l)};
}

std::span<const EdgeId> AdjacencyStore::edges(VertexId x, Level level, EdgeKind kind) const {
  const Array* a = find_array(x, level, kind);
  return {a->slots.data(), a->count};
}

std::size_t AdjacencyStore::count(VertexId x, Level level, EdgeKind kind) const {
  return find_array(x, level, kind)->count;
}

std::size_t AdjacencyStore::capacity(VertexId x, Level level, EdgeKind kind) const {
  return find_array(x, level, kind)->slots.size();
}

std::optional<Edge> AdjacencyStore::endpoints(EdgeId e) const {
  if (e >= entries_.size()) return std::nullopt;
  const Entry& entry = entries_[e];
  if (entry.at[0].level == 0 && entry.at[1].level == 0) return std::nullopt;
  return Edge{entry.u, entry.v};
}

std::optional<AdjacencyStore::Location> AdjacencyStore::locate(EdgeId e, VertexId x) const {
  int side = side_of(e, x);
  if (side < 0) return std::nullopt;
  const Location& at = entries_[e].at[side];
  if (at.level == 0) return std::nullopt;
  return at;
}

std::optional<std::string> AdjacencyStore::audit() const {
  std::size_t stored = 0;
  for (VertexId x = 0; x < num_vertices_; ++x) {
    for (Level level = 1; level <= num_levels_; ++level) {
      for (EdgeKind kind : {EdgeKind::kTree, EdgeKind::kNonTree}) {
        const Array& a = arrays_[array_index(x, level, kind)];
        if (a.count > a.slots.size()) {
          return "adjacency array count exceeds capacity at vertex " + std::to_string(x);
        }
        for (std::uint32_t s = 0; s < a.count; ++s) {
          EdgeId e = a.slots[s];
          int side = side_of(e, x);
          if (side < 0) {
            std::ostringstream os;
            os << "adjacency slot " << s << " of vertex " << x << " holds a foreign edge";
            return os.str();
          }
          const Location& at = entries_[e].at[side];
          if (at.level != level || at.kind != kind || at.slot != s) {
            std::ostringstream os;
            os << "back-index mismatch for edge " << e << " at vertex " << x << " (level "
               << level << ", " << to_string(kind) << ", slot " << s << ")";
            return os.str();
          }
          ++stored;
        }
      }
    }
  }
  std::size_t recorded = 0;
  for (const Entry& entry : entries_) {
    for (const Location& at : entry.at) recorded += at.level != 0 ? 1 : 0;
  }
  if (stored != recorded) return "back-index table disagrees with array contents";
  return std::nullopt;
}

}  // namespace dyncon
