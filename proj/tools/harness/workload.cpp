#include "workload.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dyncon::harness {

namespace {

char kind_letter(BatchKind kind) { return to_string(kind)[0]; }

template <class T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ScriptError("line " + std::to_string(line) + ": " + what);
}

// Pairs of sizes delta + j, delta - j.
class Sizer {
 public:
  Sizer(std::size_t delta, double spread) : delta_(delta) {
    max_jitter_ = static_cast<std::size_t>(std::floor(spread * static_cast<double>(delta - 1)));
  }

  std::size_t next(std::mt19937_64& rng) {
    if (has_partner_) {
      has_partner_ = false;
      return partner_;
    }
    std::uniform_int_distribution<std::size_t> jitter(0, max_jitter_);
    const std::size_t j = jitter(rng);
    partner_ = delta_ - j;
    has_partner_ = true;
    return delta_ + j;
  }

 private:
  std::size_t delta_;
  std::size_t max_jitter_ = 0;
  std::size_t partner_ = 0;
  bool has_partner_ = false;
};

class LiveEdges {
 public:
  bool contains(const Edge& e) const { return index_.count(edge_key(e)) != 0; }
  std::size_t size() const { return edges_.size(); }

  void add(const Edge& e) {
    index_.emplace(edge_key(e), edges_.size());
    edges_.push_back(e);
  }

  Edge take(std::size_t at) {
    const Edge e = edges_[at];
    index_.erase(edge_key(e));
    if (at + 1 != edges_.size()) {
      edges_[at] = edges_.back();
      index_[edge_key(edges_[at])] = at;
    }
    edges_.pop_back();
    return e;
  }

 private:
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

std::vector<Edge> fresh_edges(std::size_t n, std::size_t k, const LiveEdges& live,
                              std::mt19937_64& rng) {
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::unordered_set<std::uint64_t> chosen;
  std::vector<Edge> out;
  std::size_t misses = 0;
  while (out.size() < k && misses < 64 * k + 1024) {
    Edge e = Edge{pick(rng), pick(rng)}.canonical();
    if (e.is_self_loop() || live.contains(e) || !chosen.insert(edge_key(e)).second) {
      ++misses;
      continue;
    }
    out.push_back(e);
  }
  if (out.size() < k) {
    // Dense graph: sample from the explicit complement.
    std::vector<Edge> missing;
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        const Edge e{u, v};
        if (!live.contains(e) && !chosen.count(edge_key(e))) missing.push_back(e);
      }
    }
    std::shuffle(missing.begin(), missing.end(), rng);
    missing.resize(std::min(missing.size(), k - out.size()));
    out.insert(out.end(), missing.begin(), missing.end());
  }
  return out;
}

}  // namespace

std::string serialize(const Script& script) {
  std::ostringstream os;
  os << "# n=" << script.n << " seed=" << script.seed << '\n';
  for (const Batch& b : script.batches) {
    os << "B " << kind_letter(b.kind) << '\n';
    for (const Edge& e : b.edges) os << "E " << e.u << ' ' << e.v << '\n';
  }
  return os.str();
}

Script parse_script(std::string_view text) {
  Script script;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    ++line_no;
    const std::size_t end = text.find('\n');
    if (end == std::string_view::npos) fail_at(line_no, "missing final newline");
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(end + 1);

    if (!header) {
      constexpr std::string_view kN = "# n=";
      constexpr std::string_view kSeed = " seed=";
      const std::size_t at = line.find(kSeed);
      if (line.substr(0, kN.size()) != kN || at == std::string_view::npos ||
          !parse_number(line.substr(kN.size(), at - kN.size()), script.n) ||
          !parse_number(line.substr(at + kSeed.size()), script.seed)) {
        fail_at(line_no, "expected header '# n=<int> seed=<int>'");
      }
      if (script.n == 0) fail_at(line_no, "n must be positive");
      header = true;
      continue;
    }
    if (line.size() == 3 && line[0] == 'B' && line[1] == ' ') {
      Batch b;
      switch (line[2]) {
        case 'I': b.kind = BatchKind::kInsert; break;
        case 'D': b.kind = BatchKind::kDelete; break;
        case 'Q': b.kind = BatchKind::kQuery; break;
        default: fail_at(line_no, "unknown batch type");
      }
      script.batches.push_back(std::move(b));
      continue;
    }
    if (line.size() > 2 && line[0] == 'E' && line[1] == ' ') {
      if (script.batches.empty()) fail_at(line_no, "edge outside a batch");
      const std::string_view rest = line.substr(2);
      const std::size_t space = rest.find(' ');
      Edge e;
      if (space == std::string_view::npos || !parse_number(rest.substr(0, space), e.u) ||
          !parse_number(rest.substr(space + 1), e.v)) {
        fail_at(line_no, "expected 'E <u> <v>'");
      }
      script.batches.back().edges.push_back(e);
      continue;
    }
    fail_at(line_no, "unrecognized line");
  }
  if (!header) throw ScriptError("empty script: missing header");
  return script;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScriptError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Script read_script_file(const std::string& path) { return parse_script(read_text_file(path)); }

Script generate(const GenerateOptions& o) {
  if (o.n == 0) throw GenerateError("n must be positive");
  if (o.delta == 0) throw GenerateError("delta must be positive");
  if (o.insert_ratio < 0 || o.delete_ratio < 0 || o.query_ratio < 0) {
    throw GenerateError("ratios must be non-negative");
  }
  if (std::abs(o.insert_ratio + o.delete_ratio + o.query_ratio - 1.0) > 1e-9) {
    throw GenerateError("ratios must sum to 1");
  }
  if (o.spread < 0 || o.spread > 1) throw GenerateError("spread must lie in [0, 1]");
  if (o.delete_ratio > 0 && o.insert_ratio == 0) {
    throw GenerateError("deletions requested without any insertions");
  }
  const std::size_t max_edges = o.n * (o.n - 1) / 2;
  if (o.insert_ratio > 0 && max_edges == 0) throw GenerateError("no edges fit on one vertex");

  Script script;
  script.n = o.n;
  script.seed = o.seed;
  std::mt19937_64 rng(o.seed);
  std::discrete_distribution<int> type({o.insert_ratio, o.delete_ratio, o.query_ratio});
  Sizer insert_size(o.delta, o.spread);
  Sizer delete_size(o.delta, o.spread);
  Sizer query_size(o.delta, o.spread);
  std::size_t pending_delete = 0;  // postponed delete batch size, 0 when none
  LiveEdges live;
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(o.n - 1));

  for (std::size_t b = 0; b < o.batches; ++b) {
    Batch batch;
    batch.kind = static_cast<BatchKind>(type(rng));
    if (batch.kind == BatchKind::kDelete) {
      const std::size_t k = pending_delete != 0 ? pending_delete : delete_size.next(rng);
      pending_delete = 0;
      if (live.size() < k) {
        pending_delete = k;
        batch.kind = BatchKind::kInsert;
      } else {
        for (std::size_t j = 0; j < k; ++j) {
          std::uniform_int_distribution<std::size_t> at(0, live.size() - 1);
          batch.edges.push_back(live.take(at(rng)));
        }
      }
    }
    if (batch.kind == BatchKind::kInsert) {
      const std::size_t room = max_edges - live.size();
      if (room == 0) throw GenerateError("graph is complete; cannot insert more edges");
      const std::size_t k = std::min(insert_size.next(rng), room);
      batch.edges = fresh_edges(o.n, k, live, rng);
      for (const Edge& e : batch.edges) live.add(e);
    }
    if (batch.kind == BatchKind::kQuery) {
      const std::size_t k = query_size.next(rng);
      for (std::size_t j = 0; j < k; ++j) {
        batch.edges.push_back(Edge{vertex(rng), vertex(rng)}.canonical());
      }
    }
    script.batches.push_back(std::move(batch));
  }
  return script;
}

}  // namespace dyncon::harness
