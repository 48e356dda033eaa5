#pragma once

// Bulk primitives shared by the forest and level-structure code: semisort,
// pack, a batched dictionary and a static spanning forest. All of them are
// batch transformations without shared state; the asymptotic depth of the
// textbook parallel versions is not a goal here.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace dyncon {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded hash adaptor. Stands in for the uniformly random hash function the
// bounds assume; no w.h.p. claims are made for it.
template <class Key, class Base = std::hash<Key>>
struct SeededHash {
  std::uint64_t seed = 0;
  std::size_t operator()(const Key& key) const noexcept {
    return static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(Base{}(key)) ^ seed));
  }
};

template <class Key, class Payload>
struct KeyedItem {
  Key key;
  Payload payload;

  friend bool operator==(const KeyedItem&, const KeyedItem&) = default;
};

// Groups items with equal keys into contiguous runs. The output is a
// permutation of the input; the order between distinct keys is unspecified
// (here: by seeded hash), the order within a run is the input order.
template <class Key, class Payload, class Hash = std::hash<Key>>
std::vector<KeyedItem<Key, Payload>> semisort(std::vector<KeyedItem<Key, Payload>> items,
                                              std::uint64_t seed = 0) {
  if (items.size() < 2) return items;
  SeededHash<Key, Hash> hash{seed};
  std::vector<std::pair<std::uint64_t, std::size_t>> order(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) order[i] = {hash(items[i].key), i};
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<KeyedItem<Key, Payload>> out;
  out.reserve(items.size());
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && order[end].first == order[begin].first) ++end;
    // Distinct keys can share a hash value; split such runs by key,
    // keeping first-occurrence order.
    std::vector<bool> taken(end - begin, false);
    for (std::size_t i = begin; i < end; ++i) {
      if (taken[i - begin]) continue;
      const Key& key = items[order[i].second].key;
      for (std::size_t j = i; j < end; ++j) {
        if (!taken[j - begin] && items[order[j].second].key == key) {
          taken[j - begin] = true;
          out.push_back(std::move(items[order[j].second]));
        }
      }
    }
    begin = end;
  }
  return out;
}

// Flagged elements of `items`, in their original order.
template <class T, class Flags>
std::vector<T> pack(std::span<const T> items, const Flags& flags) {
  if (items.size() != std::size(flags)) {
    throw std::invalid_argument("pack: items and flags differ in length");
  }
  std::vector<T> out;
  std::size_t i = 0;
  for (const auto& flag : flags) {
    if (flag) out.push_back(items[i]);
    ++i;
  }
  return out;
}

template <class T>
std::vector<T> pack(const std::vector<T>& items, const std::vector<bool>& flags) {
  return pack(std::span<const T>(items), flags);
}

enum class DictOpKind : std::uint8_t { kInsert, kErase, kLookup };

template <class Key, class Value>
struct DictOp {
  DictOpKind kind = DictOpKind::kLookup;
  Key key{};
  Value value{};

  static DictOp insert(Key k, Value v) { return {DictOpKind::kInsert, std::move(k), std::move(v)}; }
  static DictOp erase(Key k) { return {DictOpKind::kErase, std::move(k), Value{}}; }
  static DictOp lookup(Key k) { return {DictOpKind::kLookup, std::move(k), Value{}}; }
};

// Dictionary with batch semantics: a batch's lookups observe the state left by
// earlier batches, then the batch's mutations apply together. At most one
// mutation per key per batch.
template <class Key, class Value, class Hash = std::hash<Key>>
class BatchDictionary {
 public:
  explicit BatchDictionary(std::uint64_t seed = 0)
      : map_(0, SeededHash<Key, Hash>{seed}) {}

  // One lookup result per kLookup op, in op order.
  std::vector<std::optional<Value>> apply(std::span<const DictOp<Key, Value>> ops) {
    std::unordered_set<Key, SeededHash<Key, Hash>> mutated(0, map_.hash_function());
    for (const auto& op : ops) {
      if (op.kind != DictOpKind::kLookup && !mutated.insert(op.key).second) {
        throw std::invalid_argument("batch dictionary: conflicting mutations on one key");
      }
    }
    std::vector<std::optional<Value>> results;
    for (const auto& op : ops) {
      if (op.kind == DictOpKind::kLookup) results.push_back(find(op.key));
    }
    for (const auto& op : ops) {
      if (op.kind == DictOpKind::kInsert) {
        map_.insert_or_assign(op.key, op.value);
      } else if (op.kind == DictOpKind::kErase) {
        map_.erase(op.key);
      }
    }
    return results;
  }

  void insert_batch(std::span<const std::pair<Key, Value>> entries) {
    std::vector<DictOp<Key, Value>> ops;
    ops.reserve(entries.size());
    for (const auto& [k, v] : entries) ops.push_back(DictOp<Key, Value>::insert(k, v));
    apply(ops);
  }

  void erase_batch(std::span<const Key> keys) {
    std::vector<DictOp<Key, Value>> ops;
    ops.reserve(keys.size());
    for (const auto& k : keys) ops.push_back(DictOp<Key, Value>::erase(k));
    apply(ops);
  }

  std::vector<std::optional<Value>> lookup_batch(std::span<const Key> keys) const {
    std::vector<std::optional<Value>> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(find(k));
    return out;
  }

  std::optional<Value> find(const Key& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Key& key) const { return map_.count(key) != 0; }
  std::size_t size() const { return map_.size(); }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [k, v] : map_) f(k, v);
  }

 private:
  std::unordered_map<Key, Value, SeededHash<Key, Hash>> map_;
};

template <class Label>
struct SpanningForestResult {
  // Indices into the input edge list, increasing.
  std::vector<std::size_t> forest;
  // Component label per endpoint label; a label is the label of some member.
  std::unordered_map<Label, Label> labels;
};

// Maximal acyclic subset of a multigraph given as an edge list, by
// union-by-size over the edges in index order (lower index wins ties).
template <class Label, class Hash = std::hash<Label>>
SpanningForestResult<Label> spanning_forest(std::span<const std::pair<Label, Label>> edges) {
  std::unordered_map<Label, std::size_t, Hash> index;
  std::vector<Label> names;
  auto id_of = [&](const Label& label) {
    auto [it, inserted] = index.try_emplace(label, names.size());
    if (inserted) names.push_back(label);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> local;
  local.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    std::size_t ia = id_of(a);
    std::size_t ib = id_of(b);
    local.emplace_back(ia, ib);
  }

  std::vector<std::size_t> parent(names.size());
  std::vector<std::size_t> size(names.size(), 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  SpanningForestResult<Label> result;
  for (std::size_t i = 0; i < local.size(); ++i) {
    std::size_t ra = find(local[i].first);
    std::size_t rb = find(local[i].second);
    if (ra == rb) continue;
    if (size[ra] < size[rb] || (size[ra] == size[rb] && rb < ra)) std::swap(ra, rb);
    parent[rb] = ra;
    size[ra] += size[rb];
    result.forest.push_back(i);
  }
  result.labels.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) result.labels.emplace(names[i], names[find(i)]);
  return result;
}

template <class Label, class Hash = std::hash<Label>>
SpanningForestResult<Label> spanning_forest(const std::vector<std::pair<Label, Label>>& edges) {
  return spanning_forest<Label, Hash>(std::span<const std::pair<Label, Label>>(edges));
}

// Runs f(i) for i in [0, n) on up to `threads` workers. Each index must touch
// disjoint state. threads <= 1 runs inline in index order.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dyncon
