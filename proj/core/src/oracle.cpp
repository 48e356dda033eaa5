#include "dyncon/oracle.hpp"

#include <deque>
#include <stdexcept>

namespace dyncon {

const char* to_string(BatchKind kind) {
  switch (kind) {
    case BatchKind::kInsert: return "I";
    case BatchKind::kDelete: return "D";
    case BatchKind::kQuery: return "Q";
  }
  return "?";
}

OracleGraph::OracleGraph(std::size_t num_vertices) : num_vertices_(num_vertices) {
  if (num_vertices == 0) throw std::invalid_argument("oracle: need at least one vertex");
}

void OracleGraph::apply(BatchKind kind, std::span<const Edge> batch) {
  std::set<Edge> seen;
  for (const Edge& raw : batch) {
    if (raw.u >= num_vertices_ || raw.v >= num_vertices_) throw BatchError("vertex out of range");
    if (kind == BatchKind::kQuery) continue;
    const Edge e = raw.canonical();
    if (kind == BatchKind::kInsert && e.is_self_loop()) throw BatchError("insert: self-loop");
    if (!seen.insert(e).second) throw BatchError("duplicate edge in batch");
    const bool present = edges_.count(e) != 0;
    if (kind == BatchKind::kInsert && present) throw BatchError("insert: edge already present");
    if (kind == BatchKind::kDelete && !present) throw BatchError("delete: edge not present");
  }
  for (const Edge& e : seen) {
    if (kind == BatchKind::kInsert) {
      edges_.insert(e);
    } else {
      edges_.erase(e);
    }
  }
}

bool OracleGraph::connected(VertexId u, VertexId v) const {
  if (u >= num_vertices_ || v >= num_vertices_) throw std::out_of_range("oracle: unknown vertex");
  if (u == v) return true;
  std::vector<std::vector<VertexId>> adj(num_vertices_);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(num_vertices_, false);
  std::deque<VertexId> queue{u};
  seen[u] = true;
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    for (VertexId y : adj[x]) {
      if (y == v) return true;
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  return false;
}

std::vector<bool> OracleGraph::batch_connected(std::span<const Edge> queries) const {
  for (const Edge& q : queries) {
    if (q.u >= num_vertices_ || q.v >= num_vertices_) {
      throw std::out_of_range("oracle: unknown vertex");
    }
  }
  const std::vector<VertexId> label = components();
  std::vector<bool> out;
  out.reserve(queries.size());
  for (const Edge& q : queries) out.push_back(label[q.u] == label[q.v]);
  return out;
}

std::vector<VertexId> OracleGraph::components() const {
  std::vector<Edge> list(edges_.begin(), edges_.end());
  return components(num_vertices_, list);
}

std::vector<VertexId> OracleGraph::components(std::size_t num_vertices,
                                              std::span<const Edge> edges) {
  std::vector<std::vector<VertexId>> adj(num_vertices);
  for (const Edge& e : edges) {
    adj.at(e.u).push_back(e.v);
    adj.at(e.v).push_back(e.u);
  }
  constexpr VertexId kUnset = ~VertexId{0};
  std::vector<VertexId> label(num_vertices, kUnset);
  std::deque<VertexId> queue;
  for (VertexId s = 0; s < num_vertices; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = s;
    queue.push_back(s);
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      for (VertexId y : adj[x]) {
        if (label[y] == kUnset) {
          label[y] = s;
          queue.push_back(y);
        }
      }
    }
  }
  return label;
}

}  // namespace dyncon
