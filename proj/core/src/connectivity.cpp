#include "dyncon/connectivity.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace dyncon {

const char* to_string(SearchStrategy strategy) {
  return strategy == SearchStrategy::kSimple ? "simple" : "interleaved";
}

std::optional<SearchStrategy> parse_strategy(std::string_view name) {
  if (name == "simple") return SearchStrategy::kSimple;
  if (name == "interleaved") return SearchStrategy::kInterleaved;
  return std::nullopt;
}

const char* to_string(AuditCheck check) {
  switch (check) {
    case AuditCheck::kComponentSize: return "component-size";
    case AuditCheck::kMinimumForest: return "minimum-forest";
    case AuditCheck::kForestNesting: return "forest-nesting";
    case AuditCheck::kForestStructure: return "forest-structure";
    case AuditCheck::kAdjacency: return "adjacency";
    case AuditCheck::kLevelHistory: return "level-history";
    case AuditCheck::kPushBound: return "push-bound";
    case AuditCheck::kDictionary: return "dictionary";
  }
  return "unknown";
}

std::string AuditReport::summary() const {
  if (ok()) return "pass";
  std::ostringstream os;
  os << "fail " << to_string(failures.front().check) << ": " << failures.front().detail;
  if (failures.size() > 1) os << " (+" << failures.size() - 1 << " more)";
  return os.str();
}

DynamicConnectivity::DynamicConnectivity(std::size_t num_vertices, std::uint64_t seed,
                                         SearchStrategy strategy, ConnectivityOptions options)
    : num_vertices_(num_vertices),
      num_levels_(num_vertices == 0 ? 1 : max_level_for(num_vertices)),
      strategy_(strategy),
      options_(options),
      dictionary_(mix64(seed ^ 0x6a09e667f3bcc908ull)) {
  if (num_vertices == 0) throw std::invalid_argument("connectivity: need at least one vertex");
  if (num_vertices > 0xfffffff0u) throw std::invalid_argument("connectivity: too many vertices");
  adjacency_ = std::make_unique<AdjacencyStore>(num_vertices, num_levels_);
  forests_.reserve(num_levels_);
  for (Level i = 1; i <= num_levels_; ++i) {
    forests_.push_back(std::make_unique<EulerTourForest>(num_vertices, i, mix64(seed + i),
                                                         adjacency_.get()));
  }
  counters_.rounds_per_level.assign(num_levels_, 0);
}

void DynamicConnectivity::check_vertex(VertexId v) const {
  if (v >= num_vertices_) throw BatchError("vertex out of range");
}

std::uint64_t DynamicConnectivity::half_capacity(Level i) {
  return i == 0 ? 0 : std::uint64_t{1} << (i - 1);
}

EdgeRef DynamicConnectivity::ref(EdgeId e) const {
  const EdgeRecord& r = records_[e];
  return {e, r.u, r.v};
}

std::vector<EdgeRef> DynamicConnectivity::refs(std::span<const EdgeId> edges) const {
  std::vector<EdgeRef> out;
  out.reserve(edges.size());
  for (EdgeId e : edges) out.push_back(ref(e));
  return out;
}

std::vector<Edge> DynamicConnectivity::endpoints(std::span<const EdgeId> edges) const {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (EdgeId e : edges) out.push_back({records_[e].u, records_[e].v});
  return out;
}

EdgeId DynamicConnectivity::allocate(VertexId u, VertexId v) {
  EdgeId e;
  if (!free_records_.empty()) {
    e = free_records_.back();
    free_records_.pop_back();
  } else {
    e = static_cast<EdgeId>(records_.size());
    records_.emplace_back();
  }
  EdgeRecord& r = records_[e];
  r.u = u;
  r.v = v;
  r.level = num_levels_;
  r.is_tree = false;
  r.alive = true;
  r.history.assign(1, num_levels_);
  return e;
}

void DynamicConnectivity::release(EdgeId e) {
  records_[e].alive = false;
  records_[e].history.clear();
  free_records_.push_back(e);
}

void DynamicConnectivity::record_level(EdgeId e, Level level) {
  EdgeRecord& r = records_[e];
  if (level >= r.level) ++history_violations_;
  r.level = level;
  r.history.push_back(level);
}

const std::vector<Level>& DynamicConnectivity::level_history(EdgeId e) const {
  if (e >= records_.size() || !records_[e].alive) throw std::out_of_range("level_history: no such edge");
  return records_[e].history;
}

std::optional<EdgeInfo> DynamicConnectivity::find_edge(VertexId u, VertexId v) const {
  if (u >= num_vertices_ || v >= num_vertices_) return std::nullopt;
  auto e = dictionary_.find(edge_key(u, v));
  if (!e) return std::nullopt;
  return EdgeInfo{*e, records_[*e].level, records_[*e].is_tree};
}

std::vector<Edge> DynamicConnectivity::edge_list() const {
  std::vector<Edge> out;
  out.reserve(dictionary_.size());
  dictionary_.for_each([&](std::uint64_t key, EdgeId) { out.push_back(edge_from_key(key)); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<bool> DynamicConnectivity::batch_connected(std::span<const Edge> queries) const {
  for (const Edge& q : queries) {
    check_vertex(q.u);
    check_vertex(q.v);
  }
  ++counters_.query_batches;
  counters_.queries += queries.size();
  return forests_.back()->batch_connected(queries);
}

void DynamicConnectivity::batch_insert(std::span<const Edge> edges) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size());
  std::vector<std::uint64_t> lookups;
  lookups.reserve(edges.size());
  for (const Edge& raw : edges) {
    check_vertex(raw.u);
    check_vertex(raw.v);
    if (raw.is_self_loop()) throw BatchError("insert: self-loop");
    const std::uint64_t key = edge_key(raw);
    if (!keys.insert(key).second) throw BatchError("insert: duplicate edge in batch");
    lookups.push_back(key);
  }
  for (const auto& hit : dictionary_.lookup_batch(lookups)) {
    if (hit) throw BatchError("insert: edge already present");
  }

  ++counters_.insertion_batches;
  counters_.inserted += edges.size();
  if (edges.empty()) return;

  std::vector<EdgeId> ids;
  ids.reserve(edges.size());
  std::vector<std::pair<std::uint64_t, EdgeId>> entries;
  entries.reserve(edges.size());
  for (const Edge& raw : edges) {
    const Edge e = raw.canonical();
    const EdgeId id = allocate(e.u, e.v);
    ids.push_back(id);
    entries.emplace_back(edge_key(e), id);
  }
  dictionary_.insert_batch(entries);

  EulerTourForest& top = level_forest(num_levels_);
  const std::vector<EdgeId> tree = select_forest(num_levels_, ids);
  std::unordered_set<EdgeId> in_tree(tree.begin(), tree.end());
  std::vector<EdgeId> nontree;
  for (EdgeId e : ids) {
    if (!in_tree.count(e)) nontree.push_back(e);
  }
  for (EdgeId e : tree) records_[e].is_tree = true;
  top.batch_link(endpoints(tree));
  top.add_level_edges(refs(tree), EdgeKind::kTree);
  top.add_level_edges(refs(nontree), EdgeKind::kNonTree);
}

void DynamicConnectivity::batch_delete(std::span<const Edge> edges) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(edges.size());
  std::vector<std::uint64_t> lookups;
  lookups.reserve(edges.size());
  for (const Edge& raw : edges) {
    check_vertex(raw.u);
    check_vertex(raw.v);
    const std::uint64_t key = edge_key(raw);
    if (!keys.insert(key).second) throw BatchError("delete: duplicate edge in batch");
    lookups.push_back(key);
  }
  std::vector<EdgeId> ids;
  ids.reserve(edges.size());
  for (const auto& hit : dictionary_.lookup_batch(lookups)) {
    if (!hit) throw BatchError("delete: edge not present");
    ids.push_back(*hit);
  }

  ++counters_.deletion_batches;
  counters_.deleted += edges.size();
  counters_.batches.push_back({});
  DeletionBatchStats& stats = counters_.batches.back();
  stats.size = edges.size();
  stats.pushes.assign(num_levels_, 0);
  stats.rounds.assign(num_levels_, 0);
  if (edges.empty()) return;

  // Remove from the adjacency arrays, grouped by (level, kind).
  std::vector<std::vector<EdgeId>> by_level[2];
  by_level[0].resize(num_levels_ + 1);
  by_level[1].resize(num_levels_ + 1);
  for (EdgeId e : ids) {
    const EdgeRecord& r = records_[e];
    by_level[r.is_tree ? 0 : 1][r.level].push_back(e);
  }
  for (Level i = 1; i <= num_levels_; ++i) {
    level_forest(i).remove_level_edges(by_level[0][i], EdgeKind::kTree);
    level_forest(i).remove_level_edges(by_level[1][i], EdgeKind::kNonTree);
  }

  // Cut tree edges out of F_l(e)..F_L.
  std::vector<Edge> cuts;
  Level min_level = num_levels_ + 1;
  for (Level i = 1; i <= num_levels_; ++i) {
    if (!by_level[0][i].empty()) min_level = std::min(min_level, i);
    for (EdgeId e : by_level[0][i]) cuts.push_back({records_[e].u, records_[e].v});
    if (!cuts.empty()) level_forest(i).batch_cut(cuts);
  }
  stats.tree_edges = cuts.size();

  std::vector<std::vector<VertexId>> buckets(num_levels_ + 1);
  for (Level i = 1; i <= num_levels_; ++i) {
    for (EdgeId e : by_level[0][i]) {
      buckets[i].push_back(records_[e].u);
      buckets[i].push_back(records_[e].v);
    }
  }

  dictionary_.erase_batch(lookups);
  for (EdgeId e : ids) release(e);

  if (cuts.empty()) return;
  current_batch_ = &stats;
  std::vector<VertexId> components;
  std::vector<EdgeId> found;
  for (Level i = min_level; i <= num_levels_; ++i) {
    components.insert(components.end(), buckets[i].begin(), buckets[i].end());
    LevelSearchResult result =
        strategy_ == SearchStrategy::kSimple
            ? parallel_level_search(i, std::move(components), std::move(found))
            : interleaved_level_search(i, std::move(components), std::move(found));
    components = std::move(result.deactivated);
    found = std::move(result.found);
  }
  current_batch_ = nullptr;
}

void DynamicConnectivity::debug_relevel(VertexId u, VertexId v, Level level) {
  auto info = find_edge(u, v);
  if (!info) throw std::invalid_argument("debug_relevel: no such edge");
  if (level < 1 || level > info->level) {
    throw std::invalid_argument("debug_relevel: level must not increase");
  }
  if (level == info->level) return;
  const EdgeId e = info->id;
  const EdgeId one[] = {e};
  const EdgeRef r[] = {ref(e)};
  const EdgeKind kind = info->is_tree ? EdgeKind::kTree : EdgeKind::kNonTree;
  level_forest(info->level).remove_level_edges(one, kind);
  if (info->is_tree) {
    const Edge ends[] = {{records_[e].u, records_[e].v}};
    for (Level j = level; j < info->level; ++j) level_forest(j).batch_link(ends);
  }
  level_forest(level).add_level_edges(r, kind);
  records_[e].level = level;
}

}  // namespace dyncon
