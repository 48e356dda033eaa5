#include "dyncon/euler_tour_forest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dyncon/primitives.hpp"

namespace dyncon {

namespace {

void sort_unique(std::vector<std::uint32_t>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

EulerTourForest::EulerTourForest(std::size_t num_vertices, Level level, std::uint64_t seed,
                                 AdjacencyStore* adjacency)
    : num_vertices_(num_vertices),
      level_(level),
      adjacency_(adjacency),
      rng_(mix64(seed ^ (static_cast<std::uint64_t>(level) << 40))) {
  nodes_.resize(num_vertices);
  for (VertexId v = 0; v < num_vertices; ++v) {
    Node& node = nodes_[v];
    node.from = node.to = v;
    node.links.resize(static_cast<std::size_t>(draw_height()));
    for (Link& link : node.links) {
      link.next = link.prev = v;
      link.sum = AugValue{0, 0, 1};
    }
  }
}

void EulerTourForest::check_vertex(VertexId v) const {
  if (v >= num_vertices_) throw std::out_of_range("euler tour forest: vertex out of range");
}

int EulerTourForest::draw_height() {
  int h = 1;
  while (h < kMaxHeight && (rng_() & 1u)) ++h;
  return h;
}

EulerTourForest::NodeId EulerTourForest::new_arc(VertexId a, VertexId b) {
  NodeId x;
  if (!free_.empty()) {
    x = free_.back();
    free_.pop_back();
  } else {
    x = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
  }
  Node& node = nodes_[x];
  node.from = a;
  node.to = b;
  node.links.assign(static_cast<std::size_t>(draw_height()), Link{});
  arcs_.emplace(arc_key(a, b), x);
  return x;
}

void EulerTourForest::free_node(NodeId x) {
  Node& node = nodes_[x];
  arcs_.erase(arc_key(node.from, node.to));
  node.links.clear();
  free_.push_back(x);
}

// Nearest node at or before x (on level j-1) that reaches level j. kNil when
// the walk runs off a linear list or comes back around to x.
EulerTourForest::NodeId EulerTourForest::climb_left(NodeId x, int j) const {
  NodeId y = x;
  while (nodes_[y].height() <= j) {
    y = nodes_[y].links[j - 1].prev;
    if (y == kNil || y == x) return kNil;
  }
  return y;
}

EulerTourForest::NodeId EulerTourForest::climb_right(NodeId x, int j) const {
  NodeId y = x;
  while (nodes_[y].height() <= j) {
    y = nodes_[y].links[j - 1].next;
    if (y == kNil || y == x) return kNil;
  }
  return y;
}

// Cuts every link that crosses the gap between x and its level-0 successor.
void EulerTourForest::split_after(NodeId x, Dirty& dirty) {
  NodeId l = x;
  for (int j = 0; j < kMaxHeight; ++j) {
    if (j > 0) {
      l = climb_left(l, j);
      if (l == kNil) break;
    }
    NodeId r = nodes_[l].links[j].next;
    if (r == kNil) break;
    nodes_[l].links[j].next = kNil;
    nodes_[r].links[j].prev = kNil;
    dirty.relinked.emplace_back(l, j);
  }
}

// Concatenates the linear list ending at left_tail with the linear list
// starting at right_head. Passing the tail and head of one list closes it.
void EulerTourForest::join(NodeId left_tail, NodeId right_head, Dirty& dirty) {
  NodeId l = left_tail;
  NodeId r = right_head;
  for (int j = 0; j < kMaxHeight; ++j) {
    if (j > 0) {
      l = climb_left(l, j);
      r = climb_right(r, j);
      if (l == kNil || r == kNil) break;
    }
    nodes_[l].links[j].next = r;
    nodes_[r].links[j].prev = l;
    dirty.relinked.emplace_back(l, j);
  }
}

EulerTourForest::NodeId EulerTourForest::parent_at(NodeId x, int j) const {
  return climb_left(x, j);
}

void EulerTourForest::recompute(NodeId x, int j) {
  AugValue s{};
  const NodeId end = nodes_[x].links[j].next;
  NodeId y = x;
  do {
    s += nodes_[y].links[j - 1].sum;
    y = nodes_[y].links[j - 1].next;
  } while (y != end && y != kNil);
  nodes_[x].links[j].sum = s;
}

// Recomputes the sums invalidated by relinks and base-value changes,
// bottom-up. All lists must be circular.
void EulerTourForest::repair(Dirty& dirty) {
  std::vector<std::vector<NodeId>> relinked(kMaxHeight);
  int top_relinked = 0;
  std::vector<NodeId> current;
  for (auto [x, j] : dirty.relinked) {
    if (nodes_[x].height() <= j) continue;  // freed
    if (j == 0) {
      current.push_back(x);
    } else {
      relinked[j].push_back(x);
      top_relinked = std::max(top_relinked, j);
    }
  }
  for (NodeId x : dirty.rebased) {
    if (nodes_[x].height() > 0) current.push_back(x);
  }
  sort_unique(current);

  std::vector<NodeId> next;
  for (int j = 1; j < kMaxHeight; ++j) {
    next.clear();
    for (NodeId x : relinked[j]) {
      if (nodes_[x].height() > j) next.push_back(x);
    }
    for (NodeId x : current) {
      NodeId p = parent_at(x, j);
      if (p != kNil) next.push_back(p);
    }
    sort_unique(next);
    if (next.empty() && j > top_relinked) break;
    for (NodeId p : next) recompute(p, j);
    current.swap(next);
  }
  dirty.relinked.clear();
  dirty.rebased.clear();
}

void EulerTourForest::link_one(VertexId u, VertexId v, Dirty& dirty) {
  const NodeId lu = u;
  const NodeId lv = v;
  const NodeId pu = nodes_[lu].links[0].prev;
  const NodeId pv = nodes_[lv].links[0].prev;
  split_after(pu, dirty);
  split_after(pv, dirty);
  const NodeId uv = new_arc(u, v);
  const NodeId vu = new_arc(v, u);
  join(pu, uv, dirty);
  join(uv, lv, dirty);
  join(pv, vu, dirty);
  join(vu, lu, dirty);
  dirty.rebased.push_back(uv);
  dirty.rebased.push_back(vu);
}

void EulerTourForest::cut_one(VertexId u, VertexId v, Dirty& dirty) {
  const NodeId uv = arcs_.at(arc_key(u, v));
  const NodeId vu = arcs_.at(arc_key(v, u));
  // Tour: ... p1 [uv] s1 ... p2 [vu] s2 ... ; [s1..p2] is v's side.
  const NodeId p1 = nodes_[uv].links[0].prev;
  const NodeId s1 = nodes_[uv].links[0].next;
  const NodeId p2 = nodes_[vu].links[0].prev;
  const NodeId s2 = nodes_[vu].links[0].next;
  split_after(p1, dirty);
  split_after(uv, dirty);
  split_after(p2, dirty);
  split_after(vu, dirty);
  join(p2, s1, dirty);
  join(p1, s2, dirty);
  free_node(uv);
  free_node(vu);
}

void EulerTourForest::batch_link(std::span<const Edge> edges) {
  if (edges.empty()) return;
  std::vector<std::pair<ReprId, ReprId>> pairs;
  pairs.reserve(edges.size());
  std::unordered_set<std::uint64_t> seen;
  for (const Edge& e : edges) {
    check_vertex(e.u);
    check_vertex(e.v);
    if (e.is_self_loop()) throw BatchError("batch_link: self-loop");
    if (arcs_.count(arc_key(e.u, e.v))) throw BatchError("batch_link: edge already in forest");
    if (!seen.insert(edge_key(e)).second) throw BatchError("batch_link: duplicate edge in batch");
    pairs.emplace_back(find_repr(e.u), find_repr(e.v));
  }
  if (spanning_forest(pairs).forest.size() != pairs.size()) {
    throw BatchError("batch_link: batch would create a cycle");
  }
  Dirty dirty;
  for (const Edge& e : edges) link_one(e.u, e.v, dirty);
  repair(dirty);
}

void EulerTourForest::batch_cut(std::span<const Edge> edges) {
  if (edges.empty()) return;
  std::unordered_set<std::uint64_t> seen;
  for (const Edge& e : edges) {
    check_vertex(e.u);
    check_vertex(e.v);
    if (!arcs_.count(arc_key(e.u, e.v))) throw BatchError("batch_cut: edge not in forest");
    if (!seen.insert(edge_key(e)).second) throw BatchError("batch_cut: duplicate edge in batch");
  }
  Dirty dirty;
  for (const Edge& e : edges) cut_one(e.u, e.v, dirty);
  repair(dirty);
}

std::pair<EulerTourForest::NodeId, int> EulerTourForest::top_of(NodeId x) const {
  NodeId cur = x;
  int j = 0;
  for (;;) {
    NodeId y = cur;
    bool climbed = false;
    do {
      if (nodes_[y].height() > j + 1) {
        cur = y;
        ++j;
        climbed = true;
        break;
      }
      y = nodes_[y].links[j].next;
    } while (y != cur);
    if (!climbed) return {cur, j};
  }
}

ReprId EulerTourForest::find_repr(VertexId v) const {
  check_vertex(v);
  auto [start, j] = top_of(v);
  NodeId best = start;
  for (NodeId y = nodes_[start].links[j].next; y != start; y = nodes_[y].links[j].next) {
    best = std::min(best, y);
  }
  return best;
}

std::vector<ReprId> EulerTourForest::batch_find_repr(std::span<const VertexId> vertices) const {
  std::vector<ReprId> out;
  out.reserve(vertices.size());
  for (VertexId v : vertices) out.push_back(find_repr(v));
  return out;
}

bool EulerTourForest::connected(VertexId u, VertexId v) const {
  return u == v ? (check_vertex(u), true) : find_repr(u) == find_repr(v);
}

std::vector<bool> EulerTourForest::batch_connected(std::span<const Edge> queries) const {
  std::vector<bool> out;
  out.reserve(queries.size());
  for (const Edge& q : queries) out.push_back(connected(q.u, q.v));
  return out;
}

bool EulerTourForest::has_edge(VertexId u, VertexId v) const {
  return arcs_.count(arc_key(u, v)) != 0;
}

AugValue EulerTourForest::tree_totals(VertexId v) const {
  check_vertex(v);
  auto [start, j] = top_of(v);
  AugValue total = nodes_[start].links[j].sum;
  for (NodeId y = nodes_[start].links[j].next; y != start; y = nodes_[y].links[j].next) {
    total += nodes_[y].links[j].sum;
  }
  return total;
}

std::size_t EulerTourForest::component_size(VertexId v) const {
  return static_cast<std::size_t>(tree_totals(v).vertices);
}

std::size_t EulerTourForest::num_nontree_edges(VertexId v) const {
  return static_cast<std::size_t>(tree_totals(v).nontree);
}

std::size_t EulerTourForest::num_tree_edges(VertexId v) const {
  return static_cast<std::size_t>(tree_totals(v).tree);
}

std::size_t EulerTourForest::edge_count(VertexId v, EdgeKind kind) const {
  return static_cast<std::size_t>(tree_totals(v).count(kind));
}

AugValue EulerTourForest::vertex_value(VertexId v) const {
  check_vertex(v);
  return nodes_[v].links[0].sum;
}

void EulerTourForest::adjust_edge_counts(std::span<const CountDelta> deltas) {
  if (deltas.empty()) return;
  std::map<std::pair<VertexId, EdgeKind>, std::int64_t> net;
  for (const CountDelta& d : deltas) {
    check_vertex(d.vertex);
    net[{d.vertex, d.kind}] += d.delta;
  }
  for (const auto& [key, delta] : net) {
    if (nodes_[key.first].links[0].sum.count(key.second) + delta < 0) {
      throw BatchError("adjust_edge_counts: count would become negative");
    }
  }
  Dirty dirty;
  for (const auto& [key, delta] : net) {
    if (delta == 0) continue;
    AugValue& base = nodes_[key.first].links[0].sum;
    (key.second == EdgeKind::kTree ? base.tree : base.nontree) += delta;
    dirty.rebased.push_back(key.first);
  }
  repair(dirty);
}

void EulerTourForest::collect(NodeId x, int j, EdgeKind kind,
                              std::vector<std::pair<VertexId, std::size_t>>& takes) const {
  const std::int64_t c = nodes_[x].links[j].sum.count(kind);
  if (c == 0) return;
  if (j == 0) {
    takes.emplace_back(nodes_[x].from, static_cast<std::size_t>(c));
    return;
  }
  const NodeId end = nodes_[x].links[j].next;
  NodeId y = x;
  do {
    collect(y, j - 1, kind, takes);
    y = nodes_[y].links[j - 1].next;
  } while (y != end);
}

std::vector<EdgeId> EulerTourForest::fetch_level_edges(VertexId v, std::size_t l,
                                                       EdgeKind kind) const {
  if (adjacency_ == nullptr) throw std::logic_error("fetch_level_edges: no adjacency store");
  const std::size_t available = edge_count(v, kind);
  if (l > available) throw std::out_of_range("fetch_level_edges: not enough edges in tree");
  if (l == 0) return {};

  // Finger walk from v's loop: take whole ranges while they fit, climbing
  // when the current node is tall enough, and descend into the range that
  // holds the boundary.
  std::vector<std::pair<VertexId, std::size_t>> takes;
  auto remaining = static_cast<std::int64_t>(l);
  NodeId x = v;
  int j = 0;
  while (remaining > 0) {
    while (j + 1 < nodes_[x].height() && nodes_[x].links[j + 1].sum.count(kind) <= remaining) ++j;
    const std::int64_t s = nodes_[x].links[j].sum.count(kind);
    if (s <= remaining) {
      collect(x, j, kind, takes);
      remaining -= s;
      x = nodes_[x].links[j].next;
      continue;
    }
    if (j == 0) {
      takes.emplace_back(nodes_[x].from, static_cast<std::size_t>(remaining));
      break;
    }
    --j;
  }

  std::vector<EdgeId> out;
  std::unordered_set<EdgeId> seen;
  for (auto [vertex, count] : takes) {
    for (EdgeId e : adjacency_->fetch_edges(vertex, level_, kind, count)) {
      if (seen.insert(e).second) out.push_back(e);
    }
  }
  return out;
}

void EulerTourForest::add_level_edges(std::span<const EdgeRef> edges, EdgeKind kind) {
  if (edges.empty()) return;
  if (adjacency_ == nullptr) throw std::logic_error("add_level_edges: no adjacency store");
  std::unordered_set<EdgeId> ids;
  std::vector<KeyedItem<VertexId, EdgeRef>> items;
  items.reserve(edges.size() * 2);
  for (const EdgeRef& ref : edges) {
    check_vertex(ref.u);
    check_vertex(ref.v);
    if (ref.u == ref.v) throw BatchError("add_level_edges: self-loop");
    if (!ids.insert(ref.id).second) throw BatchError("add_level_edges: duplicate edge");
    if (adjacency_->locate(ref.id, ref.u) || adjacency_->locate(ref.id, ref.v)) {
      throw BatchError("add_level_edges: edge already stored");
    }
    items.push_back({ref.u, ref});
    items.push_back({ref.v, ref});
  }
  items = semisort(std::move(items));
  std::vector<CountDelta> deltas;
  std::vector<EdgeRef> run;
  for (std::size_t i = 0; i < items.size();) {
    const VertexId x = items[i].key;
    run.clear();
    for (; i < items.size() && items[i].key == x; ++i) run.push_back(items[i].payload);
    adjacency_->insert_edges(x, level_, kind, run);
    deltas.push_back({x, kind, static_cast<std::int64_t>(run.size())});
  }
  adjust_edge_counts(deltas);
}

void EulerTourForest::remove_level_edges(VertexId v, std::span<const EdgeId> edges,
                                         EdgeKind kind) {
  if (edges.empty()) return;
  if (adjacency_ == nullptr) throw std::logic_error("remove_level_edges: no adjacency store");
  const ReprId root = find_repr(v);
  for (EdgeId e : edges) {
    auto ends = adjacency_->endpoints(e);
    if (!ends) throw BatchError("remove_level_edges: unknown edge");
    if (find_repr(ends->u) != root && find_repr(ends->v) != root) {
      throw BatchError("remove_level_edges: edge outside the tree");
    }
  }
  remove_level_edges(edges, kind);
}

void EulerTourForest::remove_level_edges(std::span<const EdgeId> edges, EdgeKind kind) {
  if (edges.empty()) return;
  if (adjacency_ == nullptr) throw std::logic_error("remove_level_edges: no adjacency store");
  std::unordered_set<EdgeId> ids;
  std::vector<KeyedItem<VertexId, EdgeId>> items;
  items.reserve(edges.size() * 2);
  for (EdgeId e : edges) {
    auto ends = adjacency_->endpoints(e);
    if (!ends) throw BatchError("remove_level_edges: unknown edge");
    for (VertexId x : {ends->u, ends->v}) {
      auto at = adjacency_->locate(e, x);
      if (!at || at->level != level_ || at->kind != kind) {
        throw BatchError("remove_level_edges: edge not at this level");
      }
    }
    if (!ids.insert(e).second) throw BatchError("remove_level_edges: duplicate edge");
    items.push_back({ends->u, e});
    items.push_back({ends->v, e});
  }
  items = semisort(std::move(items));
  std::vector<CountDelta> deltas;
  std::vector<EdgeId> run;
  for (std::size_t i = 0; i < items.size();) {
    const VertexId x = items[i].key;
    run.clear();
    for (; i < items.size() && items[i].key == x; ++i) run.push_back(items[i].payload);
    adjacency_->delete_edges(x, level_, kind, run);
    deltas.push_back({x, kind, -static_cast<std::int64_t>(run.size())});
  }
  adjust_edge_counts(deltas);
}

std::vector<Edge> EulerTourForest::edges() const {
  std::vector<Edge> out;
  out.reserve(arcs_.size() / 2);
  for (const auto& [key, x] : arcs_) {
    if (nodes_[x].from < nodes_[x].to) out.push_back({nodes_[x].from, nodes_[x].to});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> EulerTourForest::audit() const {
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "forest level " << level_ << ": " << what;
    return std::optional<std::string>(os.str());
  };

  std::size_t live = 0;
  for (NodeId x = 0; x < nodes_.size(); ++x) {
    const Node& node = nodes_[x];
    if (node.height() == 0) continue;
    ++live;
    for (int j = 0; j < node.height(); ++j) {
      NodeId nx = node.links[j].next;
      NodeId px = node.links[j].prev;
      if (nx == kNil || px == kNil) return fail("open skip-list link");
      if (nodes_[nx].height() <= j || nodes_[nx].links[j].prev != x) {
        return fail("asymmetric skip-list link");
      }
    }
    if (!node.is_loop()) {
      auto it = arcs_.find(arc_key(node.from, node.to));
      if (it == arcs_.end() || it->second != x) return fail("arc missing from arc index");
      if (!arcs_.count(arc_key(node.to, node.from))) return fail("arc without its twin");
    }
  }

  std::vector<std::uint32_t> tour_of(nodes_.size(), kNil);
  std::size_t visited = 0;
  std::vector<NodeId> tour;
  for (VertexId v = 0; v < num_vertices_; ++v) {
    if (tour_of[v] != kNil) continue;
    tour.clear();
    NodeId x = v;
    do {
      if (tour_of[x] != kNil) return fail("tour revisits a node");
      tour_of[x] = v;
      tour.push_back(x);
      x = nodes_[x].links[0].next;
      if (tour.size() > nodes_.size()) return fail("tour does not close");
    } while (x != v);
    visited += tour.size();

    std::size_t loops = 0;
    for (std::size_t i = 0; i < tour.size(); ++i) {
      const Node& a = nodes_[tour[i]];
      const Node& b = nodes_[tour[(i + 1) % tour.size()]];
      if (a.to != b.from) return fail("tour steps between non-adjacent elements");
      loops += a.is_loop() ? 1 : 0;
    }
    if (tour.size() != loops + 2 * (loops - 1)) return fail("tour is not the tour of a tree");

    for (NodeId y : tour) {
      const Node& node = nodes_[y];
      const AugValue& base = node.links[0].sum;
      if (!node.is_loop()) {
        if (!(base == AugValue{})) return fail("arc carries a nonzero value");
        if (tour_of[arcs_.at(arc_key(node.to, node.from))] != v) {
          return fail("arc twins lie in different tours");
        }
        continue;
      }
      if (base.vertices != 1 || base.tree < 0 || base.nontree < 0) {
        return fail("bad vertex loop value");
      }
      if (adjacency_ != nullptr) {
        auto tree = static_cast<std::int64_t>(adjacency_->count(node.from, level_, EdgeKind::kTree));
        auto nontree =
            static_cast<std::int64_t>(adjacency_->count(node.from, level_, EdgeKind::kNonTree));
        if (base.tree != tree || base.nontree != nontree) {
          return fail("charged counts differ from adjacency arrays at vertex " +
                      std::to_string(node.from));
        }
      }
    }

    // Each level must list exactly the taller nodes, in tour order, and
    // carry the sum of its children.
    int height = 0;
    for (NodeId y : tour) height = std::max(height, nodes_[y].height());
    for (int j = 1; j < height; ++j) {
      std::vector<NodeId> row;
      for (NodeId y : tour) {
        if (nodes_[y].height() > j) row.push_back(y);
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (nodes_[row[i]].links[j].next != row[(i + 1) % row.size()]) {
          return fail("skip-list level out of tour order");
        }
      }
    }
    for (NodeId y : tour) {
      const Node& node = nodes_[y];
      for (int j = 1; j < node.height(); ++j) {
        AugValue s{};
        const NodeId end = node.links[j].next;
        NodeId z = y;
        do {
          s += nodes_[z].links[j - 1].sum;
          z = nodes_[z].links[j - 1].next;
        } while (z != end);
        if (!(s == node.links[j].sum)) return fail("stale augmented sum");
      }
    }
  }
  if (visited != live) return fail("arc nodes outside every tour");
  return std::nullopt;
}

std::uint64_t EulerTourForest::fingerprint() const {
  std::uint64_t h = mix64(level_);
  std::vector<bool> seen(nodes_.size(), false);
  for (VertexId v = 0; v < num_vertices_; ++v) {
    if (seen[v]) continue;
    NodeId x = v;
    do {
      seen[x] = true;
      const Node& node = nodes_[x];
      h = mix64(h ^ ((static_cast<std::uint64_t>(node.from) << 32) | node.to));
      h = mix64(h ^ static_cast<std::uint64_t>(node.height()));
      x = node.links[0].next;
    } while (x != v);
  }
  return h;
}

}  // namespace dyncon
