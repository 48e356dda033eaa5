#include <numeric>
#include <sstream>
#include <unordered_set>

#include "dyncon/connectivity.hpp"

namespace dyncon {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t size(std::uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
};

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace

AuditReport DynamicConnectivity::audit() const {
  AuditReport report;
  auto fail = [&](AuditCheck check, std::string detail) {
    report.failures.push_back({check, std::move(detail)});
  };
  const Level levels = num_levels_;

  std::vector<EdgeId> live;
  for (EdgeId e = 0; e < records_.size(); ++e) {
    if (records_[e].alive) live.push_back(e);
  }

  // Components of G_i have at most 2^i vertices.
  for (Level i = 1; i <= levels; ++i) {
    DisjointSets sets(num_vertices_);
    for (EdgeId e : live) {
      if (records_[e].level <= i) sets.unite(records_[e].u, records_[e].v);
    }
    for (VertexId v = 0; v < num_vertices_; ++v) {
      if (sets.size(v) > (std::size_t{1} << i)) {
        fail(AuditCheck::kComponentSize,
             cat("level ", i, " has a component of ", sets.size(v), " vertices"));
        break;
      }
    }
  }

  // Tree edges of level <= l must connect the endpoints of every non-tree
  // edge of level l, and all tree edges together must be acyclic.
  {
    std::vector<std::vector<EdgeId>> tree_at(levels + 1);
    std::vector<std::vector<EdgeId>> nontree_at(levels + 1);
    for (EdgeId e : live) {
      (records_[e].is_tree ? tree_at : nontree_at)[records_[e].level].push_back(e);
    }
    DisjointSets sets(num_vertices_);
    bool reported = false;
    for (Level i = 1; i <= levels && !reported; ++i) {
      for (EdgeId e : tree_at[i]) {
        if (!sets.unite(records_[e].u, records_[e].v)) {
          fail(AuditCheck::kMinimumForest,
               cat("tree edge (", records_[e].u, ",", records_[e].v, ") closes a cycle"));
          reported = true;
          break;
        }
      }
      for (EdgeId e : nontree_at[i]) {
        if (reported) break;
        if (sets.find(records_[e].u) != sets.find(records_[e].v)) {
          fail(AuditCheck::kMinimumForest,
               cat("non-tree edge (", records_[e].u, ",", records_[e].v, ") at level ", i,
                   " is not covered by tree edges of level <= ", i));
          reported = true;
        }
      }
    }
  }

  // Nesting.
  {
    std::vector<std::size_t> expected(levels + 1, 0);
    bool reported = false;
    for (EdgeId e : live) {
      const EdgeRecord& r = records_[e];
      if (!r.is_tree) continue;
      for (Level j = r.level; j <= levels; ++j) ++expected[j];
      for (Level j = 1; j <= levels && !reported; ++j) {
        if (forest(j).has_edge(r.u, r.v) != (j >= r.level)) {
          fail(AuditCheck::kForestNesting, cat("tree edge (", r.u, ",", r.v, ") of level ",
                                               r.level, " misplaced in forest ", j));
          reported = true;
        }
      }
    }
    for (Level j = 1; j <= levels && !reported; ++j) {
      if (forest(j).num_edges() != expected[j]) {
        fail(AuditCheck::kForestNesting, cat("forest ", j, " holds ", forest(j).num_edges(),
                                             " edges, expected ", expected[j]));
        reported = true;
      }
    }
  }

  for (Level j = 1; j <= levels; ++j) {
    if (auto problem = forest(j).audit()) {
      fail(AuditCheck::kForestStructure, *problem);
      break;
    }
  }

  if (auto problem = adjacency_->audit()) {
    fail(AuditCheck::kAdjacency, *problem);
  } else {
    for (EdgeId e : live) {
      const EdgeRecord& r = records_[e];
      const EdgeKind kind = r.is_tree ? EdgeKind::kTree : EdgeKind::kNonTree;
      bool good = true;
      for (VertexId x : {r.u, r.v}) {
        auto at = adjacency_->locate(e, x);
        good = good && at && at->level == r.level && at->kind == kind;
      }
      if (!good) {
        fail(AuditCheck::kAdjacency,
             cat("edge (", r.u, ",", r.v, ") not stored at both endpoints as ", to_string(kind),
                 " at level ", r.level));
        break;
      }
    }
  }

  if (history_violations_ != 0) {
    fail(AuditCheck::kLevelHistory, cat(history_violations_, " level changes did not decrease"));
  }
  for (EdgeId e : live) {
    const auto& h = records_[e].history;
    bool good = !h.empty() && h.front() == levels && h.back() == records_[e].level;
    for (std::size_t k = 1; good && k < h.size(); ++k) good = h[k] < h[k - 1];
    if (!good) {
      fail(AuditCheck::kLevelHistory,
           cat("edge (", records_[e].u, ",", records_[e].v, ") has a bad level history"));
      break;
    }
  }

  if (counters_.pushes > counters_.push_bound(levels)) {
    fail(AuditCheck::kPushBound, cat("P = ", counters_.pushes, " exceeds m*L = ",
                                     counters_.push_bound(levels)));
  }

  if (dictionary_.size() != live.size()) {
    fail(AuditCheck::kDictionary, cat("dictionary holds ", dictionary_.size(), " edges, ",
                                      live.size(), " are live"));
  } else {
    bool good = true;
    dictionary_.for_each([&](std::uint64_t key, EdgeId e) {
      if (!good) return;
      good = e < records_.size() && records_[e].alive &&
             edge_key(records_[e].u, records_[e].v) == key;
    });
    if (!good) fail(AuditCheck::kDictionary, "dictionary entry points at the wrong record");
  }
  return report;
}

}  // namespace dyncon
