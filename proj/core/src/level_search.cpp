#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dyncon/connectivity.hpp"

namespace dyncon {

namespace {

template <class T>
std::vector<T> dedupe(std::vector<T> items) {
  std::unordered_set<T> seen;
  std::vector<T> out;
  out.reserve(items.size());
  for (const T& x : items) {
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

// Union-find over F_i representatives, with the vertex count of every
// supercomponent.
class Supercomponents {
 public:
  ReprId find(ReprId x) {
    auto it = parent_.find(x);
    while (it->second != x) {
      ReprId up = parent_[it->second];
      it->second = up;
      x = up;
      it = parent_.find(x);
    }
    return x;
  }

  void add(ReprId x, std::uint64_t size) {
    if (parent_.emplace(x, x).second) size_[x] = size;
  }
  bool contains(ReprId x) const { return parent_.count(x) != 0; }

  void unite(ReprId a, ReprId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::uint64_t size(ReprId x) { return size_[find(x)]; }

 private:
  std::unordered_map<ReprId, ReprId> parent_;
  std::unordered_map<ReprId, std::uint64_t> size_;
};

}  // namespace

void DynamicConnectivity::count_round(Level i) {
  ++counters_.rounds_per_level[i - 1];
  if (current_batch_ != nullptr) ++current_batch_->rounds[i - 1];
}

void DynamicConnectivity::count_pushes(Level i, std::uint64_t count) {
  counters_.pushes += count;
  if (current_batch_ != nullptr) current_batch_->pushes[i - 1] += count;
}

void DynamicConnectivity::record_event(SearchEvent event) {
  if (!options_.trace) return;
  event.batch = counters_.deletion_batches;
  trace_.push_back(event);
}

bool DynamicConnectivity::is_replacement(Level i, EdgeId e) const {
  const EulerTourForest& f = forest(i);
  counters_.repr_queries += 2;
  return f.find_repr(records_[e].u) != f.find_repr(records_[e].v);
}

std::vector<EdgeId> DynamicConnectivity::select_forest(Level i,
                                                       std::span<const EdgeId> candidates) const {
  const EulerTourForest& f = forest(i);
  std::vector<std::pair<ReprId, ReprId>> pairs;
  pairs.reserve(candidates.size());
  for (EdgeId e : candidates) {
    pairs.emplace_back(f.find_repr(records_[e].u), f.find_repr(records_[e].v));
  }
  counters_.repr_queries += 2 * candidates.size();
  std::vector<EdgeId> out;
  for (std::size_t k : spanning_forest(pairs).forest) out.push_back(candidates[k]);
  return out;
}

void DynamicConnectivity::promote(Level i, std::span<const EdgeId> edges) {
  if (edges.empty()) return;
  EulerTourForest& f = level_forest(i);
  f.remove_level_edges(edges, EdgeKind::kNonTree);
  f.batch_link(endpoints(edges));
  f.add_level_edges(refs(edges), EdgeKind::kTree);
  for (EdgeId e : edges) records_[e].is_tree = true;
  counters_.promoted += edges.size();
}

void DynamicConnectivity::push_tree_edges(Level i, VertexId component) {
  EulerTourForest& f = level_forest(i);
  const std::size_t count = f.num_tree_edges(component);
  if (count == 0) return;
  if (i == 1) throw std::logic_error("level search: tree edge below level 1");
  const std::vector<EdgeId> edges = f.fetch_level_edges(component, count, EdgeKind::kTree);
  f.remove_level_edges(component, edges, EdgeKind::kTree);
  EulerTourForest& below = level_forest(i - 1);
  below.batch_link(endpoints(edges));
  below.add_level_edges(refs(edges), EdgeKind::kTree);
  for (EdgeId e : edges) record_level(e, i - 1);
  counters_.tree_pushes += edges.size();
  count_pushes(i, edges.size());
}

void DynamicConnectivity::push_nontree(Level i, std::span<const EdgeId> edges) {
  if (edges.empty()) return;
  if (i == 1) throw std::logic_error("level search: non-tree edge below level 1");
  level_forest(i).remove_level_edges(edges, EdgeKind::kNonTree);
  level_forest(i - 1).add_level_edges(refs(edges), EdgeKind::kNonTree);
  for (EdgeId e : edges) record_level(e, i - 1);
  counters_.nontree_pushes += edges.size();
  count_pushes(i, edges.size());
}

std::vector<VertexId> DynamicConnectivity::dedupe_components(
    Level i, std::span<const VertexId> components) const {
  const std::vector<ReprId> reprs = forest(i).batch_find_repr(components);
  std::unordered_set<ReprId> seen;
  std::vector<VertexId> out;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (seen.insert(reprs[k]).second) out.push_back(components[k]);
  }
  return out;
}

std::pair<std::vector<VertexId>, std::vector<VertexId>> DynamicConnectivity::split_components(
    Level i, std::span<const VertexId> components) const {
  std::vector<VertexId> small;
  std::vector<VertexId> large;
  for (VertexId c : dedupe_components(i, components)) {
    if (forest(i).component_size(c) <= half_capacity(i)) {
      small.push_back(c);
    } else {
      large.push_back(c);
    }
  }
  return {std::move(small), std::move(large)};
}

std::vector<EdgeId> DynamicConnectivity::component_search(Level i, VertexId component) {
  EulerTourForest& f = level_forest(i);
  SearchEvent event;
  event.level = i;
  event.round = search_round_;
  event.component = component;
  std::vector<EdgeId> result;
  std::size_t w = 1;
  for (;;) {
    const std::size_t w_max = f.num_nontree_edges(component);
    if (w_max == 0) break;
    w = std::min(w, w_max);
    const std::vector<EdgeId> window = f.fetch_level_edges(component, w, EdgeKind::kNonTree);
    ++event.phases;
    ++counters_.phases;
    event.window = w;
    std::vector<EdgeId> rest;
    for (EdgeId e : window) {
      if (!is_replacement(i, e)) {
        rest.push_back(e);
      } else if (result.empty()) {
        result.push_back(e);
      }
    }
    push_nontree(i, rest);
    event.pushed_nontree += rest.size();
    if (!result.empty() || w == w_max) break;
    w *= 2;
  }
  event.found_replacement = !result.empty();
  record_event(event);
  return result;
}

std::vector<EdgeId> DynamicConnectivity::component_search(Level i, VertexId component,
                                                          std::size_t window) const {
  const EulerTourForest& f = forest(i);
  const std::size_t take = std::min(window, f.num_nontree_edges(component));
  std::vector<EdgeId> out;
  if (take == 0) return out;
  for (EdgeId e : f.fetch_level_edges(component, take, EdgeKind::kNonTree)) {
    if (f.find_repr(records_[e].u) != f.find_repr(records_[e].v)) out.push_back(e);
  }
  return out;
}

LevelSearchResult DynamicConnectivity::parallel_level_search(Level i,
                                                             std::vector<VertexId> components,
                                                             std::vector<EdgeId> found) {
  EulerTourForest& f = level_forest(i);
  f.batch_link(endpoints(found));
  auto [active, done] = split_components(i, components);
  const std::uint64_t half = half_capacity(i);
  search_round_ = 0;
  while (!active.empty()) {
    count_round(i);
    for (VertexId c : active) push_tree_edges(i, c);
    const std::size_t first_event = trace_.size();
    std::vector<EdgeId> candidates;
    for (VertexId c : active) {
      for (EdgeId e : component_search(i, c)) candidates.push_back(e);
    }
    const std::vector<EdgeId> tree = select_forest(i, dedupe(std::move(candidates)));
    promote(i, tree);
    found.insert(found.end(), tree.begin(), tree.end());

    std::vector<VertexId> next;
    std::unordered_set<VertexId> retired;
    for (VertexId c : dedupe_components(i, active)) {
      if (f.num_nontree_edges(c) == 0 || f.component_size(c) > half) {
        done.push_back(c);
        retired.insert(c);
      } else {
        next.push_back(c);
      }
    }
    for (std::size_t k = first_event; k < trace_.size(); ++k) {
      trace_[k].deactivated = !std::any_of(next.begin(), next.end(), [&](VertexId c) {
        return f.connected(c, trace_[k].component);
      });
    }
    active = std::move(next);
    ++search_round_;
  }
  return {std::move(done), std::move(found)};
}

LevelSearchResult DynamicConnectivity::interleaved_level_search(Level i,
                                                                std::vector<VertexId> components,
                                                                std::vector<EdgeId> found) {
  EulerTourForest& f = level_forest(i);
  f.batch_link(endpoints(found));
  auto [handles, done] = split_components(i, components);
  if (handles.empty()) return {std::move(done), std::move(found)};
  for (VertexId c : handles) push_tree_edges(i, c);

  const std::uint64_t half = half_capacity(i);
  struct Active {
    VertexId handle;
    ReprId repr;
    std::uint64_t buffered;
  };
  struct Probe {
    std::uint64_t w_max = 0;
    std::vector<EdgeId> window;
    std::vector<EdgeId> replacements;
  };

  // F_i is not relinked until the level ends, so representatives stay valid.
  Supercomponents merged;
  std::vector<Active> active;
  for (VertexId c : handles) {
    const ReprId r = f.find_repr(c);
    merged.add(r, f.component_size(c));
    active.push_back({c, r, 0});
  }

  std::vector<EdgeId> tree;
  std::vector<EdgeId> buffer;
  std::unordered_set<EdgeId> in_buffer;
  std::uint32_t round = 0;
  while (!active.empty()) {
    count_round(i);
    const std::uint64_t w = round < 63 ? std::uint64_t{1} << round : ~std::uint64_t{0};
    if (round >= 1) {
      for (const Active& a : active) {
        ++counters_.doubling_checks;
        if (a.buffered < (std::uint64_t{1} << (round - 1))) ++counters_.doubling_violations;
      }
    }

    std::vector<Probe> probes(active.size());
    parallel_for(active.size(), options_.threads, [&](std::size_t k) {
      Probe& p = probes[k];
      p.w_max = f.num_nontree_edges(active[k].handle);
      const std::size_t take = static_cast<std::size_t>(std::min(w, p.w_max));
      if (take == 0) return;
      p.window = f.fetch_level_edges(active[k].handle, take, EdgeKind::kNonTree);
      for (EdgeId e : p.window) {
        if (f.find_repr(records_[e].u) != f.find_repr(records_[e].v)) p.replacements.push_back(e);
      }
    });

    std::vector<EdgeId> candidates;
    for (const Probe& p : probes) {
      counters_.repr_queries += 2 * p.window.size();
      candidates.insert(candidates.end(), p.replacements.begin(), p.replacements.end());
    }
    candidates = dedupe(std::move(candidates));
    std::vector<std::pair<ReprId, ReprId>> pairs;
    pairs.reserve(candidates.size());
    for (EdgeId e : candidates) {
      const VertexId ends[] = {records_[e].u, records_[e].v};
      ReprId r[2];
      for (int s = 0; s < 2; ++s) {
        const ReprId repr = f.find_repr(ends[s]);
        if (!merged.contains(repr)) merged.add(repr, f.component_size(ends[s]));
        r[s] = merged.find(repr);
      }
      pairs.emplace_back(r[0], r[1]);
    }
    counters_.repr_queries += 2 * candidates.size();
    for (std::size_t k : spanning_forest(pairs).forest) {
      const EdgeId e = candidates[k];
      tree.push_back(e);
      merged.unite(f.find_repr(records_[e].u), f.find_repr(records_[e].v));
    }

    std::vector<EdgeId> removed;
    std::vector<bool> pushed(active.size(), false);
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Probe& p = probes[k];
      if (merged.size(active[k].repr) <= half && w < p.w_max) {
        pushed[k] = true;
        for (EdgeId e : p.window) {
          if (in_buffer.insert(e).second) {
            buffer.push_back(e);
            removed.push_back(e);
          }
        }
      }
    }
    if (i == 1 && !removed.empty()) throw std::logic_error("level search: push below level 1");
    f.remove_level_edges(removed, EdgeKind::kNonTree);

    std::vector<Active> next;
    for (std::size_t k = 0; k < active.size(); ++k) {
      Active a = active[k];
      const std::uint64_t left = f.num_nontree_edges(a.handle);
      a.buffered = probes[k].w_max - left;
      const bool keep = pushed[k] && left > 0 && merged.size(a.repr) <= half;
      SearchEvent event;
      event.level = i;
      event.round = round;
      event.component = a.handle;
      event.phases = 1;
      event.window = std::min(w, probes[k].w_max);
      event.buffered = a.buffered;
      event.found_replacement = !probes[k].replacements.empty();
      event.deactivated = !keep;
      record_event(event);
      if (keep) {
        next.push_back(a);
      } else {
        done.push_back(a.handle);
      }
    }
    active = std::move(next);
    ++round;
  }

  // Promote T \ E_P at level i, then move E_P to level i-1.
  std::unordered_set<EdgeId> in_tree(tree.begin(), tree.end());
  std::vector<EdgeId> stay_tree;
  std::vector<EdgeId> down_tree;
  std::vector<EdgeId> down_nontree;
  for (EdgeId e : tree) (in_buffer.count(e) ? down_tree : stay_tree).push_back(e);
  for (EdgeId e : buffer) {
    if (!in_tree.count(e)) down_nontree.push_back(e);
  }
  promote(i, stay_tree);
  if (!down_tree.empty()) {
    const std::vector<Edge> ends = endpoints(down_tree);
    f.batch_link(ends);
    EulerTourForest& below = level_forest(i - 1);
    below.batch_link(ends);
    below.add_level_edges(refs(down_tree), EdgeKind::kTree);
    for (EdgeId e : down_tree) {
      records_[e].is_tree = true;
      record_level(e, i - 1);
    }
    counters_.promoted += down_tree.size();
    counters_.tree_pushes += down_tree.size();
    count_pushes(i, down_tree.size());
  }
  if (!down_nontree.empty()) {
    // A buffered non-tree edge whose endpoints are joined only through
    // level-i tree edges would break forest minimality at level i-1.
    EulerTourForest& below = level_forest(i - 1);
    std::vector<EdgeId> down;
    std::vector<EdgeId> keep;
    for (EdgeId e : down_nontree) {
      (below.connected(records_[e].u, records_[e].v) ? down : keep).push_back(e);
    }
    below.add_level_edges(refs(down), EdgeKind::kNonTree);
    for (EdgeId e : down) record_level(e, i - 1);
    counters_.nontree_pushes += down.size();
    count_pushes(i, down.size());
    f.add_level_edges(refs(keep), EdgeKind::kNonTree);
  }
  search_round_ = 0;
  found.insert(found.end(), tree.begin(), tree.end());
  return {std::move(done), std::move(found)};
}

}  // namespace dyncon
