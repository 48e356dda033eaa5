#include "runner.hpp"

#include <chrono>
#include <cstdio>
#include <regex>
#include <sstream>

namespace dyncon::harness {

const char* to_string(Verify verify) {
  switch (verify) {
    case Verify::kNone: return "none";
    case Verify::kOracle: return "oracle";
    case Verify::kFullAudit: return "full-audit";
  }
  return "none";
}

std::optional<Verify> parse_verify(std::string_view name) {
  if (name == "none") return Verify::kNone;
  if (name == "oracle") return Verify::kOracle;
  if (name == "full-audit") return Verify::kFullAudit;
  return std::nullopt;
}

RunReport run_script(const Script& script, const RunOptions& options) {
  RunReport report;
  report.n = script.n;
  report.seed = options.seed.value_or(script.seed);
  report.strategy = options.strategy;
  report.verify = options.verify;
  report.threads = options.threads;

  DynamicConnectivity g(script.n, report.seed, options.strategy, {.threads = options.threads});
  report.levels = g.num_levels();
  std::optional<OracleGraph> oracle;
  if (options.verify != Verify::kNone) oracle.emplace(script.n);

  auto fail = [&](std::size_t index, const std::string& what) {
    report.failures.push_back("batch " + std::to_string(index) + ": " + what);
  };

  for (std::size_t i = 0; i < script.batches.size(); ++i) {
    const Batch& batch = script.batches[i];
    BatchResult result;
    result.index = i;
    result.kind = batch.kind;
    result.size = batch.edges.size();

    const auto start = std::chrono::steady_clock::now();
    try {
      switch (batch.kind) {
        case BatchKind::kInsert: g.batch_insert(batch.edges); break;
        case BatchKind::kDelete: g.batch_delete(batch.edges); break;
        case BatchKind::kQuery: result.answers = g.batch_connected(batch.edges); break;
      }
    } catch (const BatchError&) {
      result.accepted = false;
    }
    const auto stop = std::chrono::steady_clock::now();
    result.time_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count());

    if (oracle) {
      bool oracle_accepts = true;
      try {
        oracle->apply(batch.kind, batch.edges);
      } catch (const BatchError&) {
        oracle_accepts = false;
      }
      if (oracle_accepts != result.accepted) {
        fail(i, result.accepted ? "engine accepted a batch the oracle rejects"
                                : "engine rejected a batch the oracle accepts");
      } else if (batch.kind == BatchKind::kQuery && result.accepted) {
        const std::vector<bool> expect = oracle->batch_connected(batch.edges);
        for (std::size_t k = 0; k < expect.size(); ++k) {
          if (expect[k] != result.answers[k]) {
            const Edge& q = batch.edges[k];
            fail(i, "query (" + std::to_string(q.u) + "," + std::to_string(q.v) +
                        ") answered " + (result.answers[k] ? "true" : "false"));
            break;
          }
        }
      }
    }
    if (options.verify == Verify::kFullAudit) {
      const AuditReport audit = g.audit();
      if (!audit.ok()) fail(i, "audit " + audit.summary());
      if (g.counters().doubling_violations != 0) fail(i, "doubling check violated");
    }
    report.batches.push_back(std::move(result));
  }
  report.counters = g.counters();
  if (options.final_audit) report.final_audit = g.audit();
  return report;
}

namespace {

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string format_report(const RunReport& r) {
  std::ostringstream os;
  os << "run n=" << r.n << " L=" << r.levels << " seed=" << r.seed
     << " strategy=" << to_string(r.strategy) << " verify=" << to_string(r.verify)
     << " batches=" << r.batches.size() << '\n';
  for (const BatchResult& b : r.batches) {
    os << "batch index=" << b.index << " type=" << to_string(b.kind) << " size=" << b.size
       << " status=" << (b.accepted ? "ok" : "rejected");
    if (b.kind == BatchKind::kQuery && b.accepted) {
      os << " answers=";
      for (bool a : b.answers) os << (a ? '1' : '0');
    }
    os << " time_us=" << b.time_us << '\n';
  }
  const WorkCounters& c = r.counters;
  os << "counter.m=" << c.inserted << '\n'
     << "counter.K=" << c.deleted << '\n'
     << "counter.P=" << c.pushes << '\n'
     << "counter.d=" << c.deletion_batches << '\n'
     << "counter.delta=" << fixed(c.average_deletion_batch()) << '\n'
     << "counter.tree_pushes=" << c.tree_pushes << '\n'
     << "counter.nontree_pushes=" << c.nontree_pushes << '\n'
     << "counter.promoted=" << c.promoted << '\n'
     << "counter.phases=" << c.phases << '\n'
     << "counter.repr_queries=" << c.repr_queries << '\n'
     << "counter.queries=" << c.queries << '\n'
     << "counter.doubling_checks=" << c.doubling_checks << '\n'
     << "counter.doubling_violations=" << c.doubling_violations << '\n';
  for (Level i = 1; i <= c.rounds_per_level.size(); ++i) {
    os << "rounds level=" << i << " count=" << c.rounds_per_level[i - 1] << '\n';
  }
  for (std::size_t b = 0; b < c.batches.size(); ++b) {
    os << "pushes batch=" << b << " k=" << c.batches[b].size << " p=";
    for (std::size_t i = 0; i < c.batches[b].pushes.size(); ++i) {
      os << (i ? "," : "") << c.batches[b].pushes[i];
    }
    os << '\n';
  }
  os << "verify.status=" << (r.verify == Verify::kNone ? "skipped" : r.verified() ? "pass" : "fail")
     << '\n';
  for (const std::string& f : r.failures) os << "verify.failure=" << f << '\n';
  return os.str();
}

nlohmann::json report_json(const RunReport& r) {
  using nlohmann::json;
  json batches = json::array();
  for (const BatchResult& b : r.batches) {
    json entry = {{"index", b.index},
                  {"type", to_string(b.kind)},
                  {"size", b.size},
                  {"status", b.accepted ? "ok" : "rejected"},
                  {"time_us", b.time_us}};
    if (b.kind == BatchKind::kQuery && b.accepted) entry["answers"] = b.answers;
    batches.push_back(std::move(entry));
  }
  const WorkCounters& c = r.counters;
  json pushes = json::array();
  for (const auto& b : c.batches) pushes.push_back({{"k", b.size}, {"p", b.pushes}});
  return {
      {"n", r.n},
      {"L", r.levels},
      {"seed", r.seed},
      {"strategy", to_string(r.strategy)},
      {"verify", to_string(r.verify)},
      {"batches", batches},
      {"counters",
       {{"m", c.inserted},
        {"K", c.deleted},
        {"P", c.pushes},
        {"d", c.deletion_batches},
        {"delta", c.average_deletion_batch()},
        {"tree_pushes", c.tree_pushes},
        {"nontree_pushes", c.nontree_pushes},
        {"promoted", c.promoted},
        {"phases", c.phases},
        {"repr_queries", c.repr_queries},
        {"queries", c.queries},
        {"doubling_checks", c.doubling_checks},
        {"doubling_violations", c.doubling_violations},
        {"rounds_per_level", c.rounds_per_level},
        {"pushes", pushes}}},
      {"verify_status", r.verify == Verify::kNone ? "skipped" : r.verified() ? "pass" : "fail"},
      {"failures", r.failures},
  };
}

std::string strip_times(std::string_view report) {
  static const std::regex kTime(" time_us=[0-9]+");
  return std::regex_replace(std::string(report), kTime, "");
}

}  // namespace dyncon::harness
