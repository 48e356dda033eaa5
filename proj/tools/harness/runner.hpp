#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyncon/connectivity.hpp"
#include "json.hpp"
#include "workload.hpp"

namespace dyncon::harness {

enum class Verify : std::uint8_t { kNone, kOracle, kFullAudit };

const char* to_string(Verify verify);
std::optional<Verify> parse_verify(std::string_view name);

struct RunOptions {
  SearchStrategy strategy = SearchStrategy::kSimple;
  Verify verify = Verify::kNone;
  unsigned threads = 1;
  // Engine seed; the script header seed when unset.
  std::optional<std::uint64_t> seed;
  // Audit once after the last batch; the result lands in RunReport::final_audit.
  bool final_audit = false;
};

struct BatchResult {
  std::size_t index = 0;
  BatchKind kind = BatchKind::kQuery;
  std::size_t size = 0;
  bool accepted = true;
  std::vector<bool> answers;
  std::uint64_t time_us = 0;
};

struct RunReport {
  std::size_t n = 0;
  Level levels = 0;
  std::uint64_t seed = 0;
  SearchStrategy strategy = SearchStrategy::kSimple;
  Verify verify = Verify::kNone;
  unsigned threads = 1;
  std::vector<BatchResult> batches;
  WorkCounters counters;
  std::vector<std::string> failures;  // verification failures, in batch order
  std::optional<AuditReport> final_audit;

  bool verified() const { return failures.empty(); }
};

// Throws std::invalid_argument when the script cannot be replayed at all.
RunReport run_script(const Script& script, const RunOptions& options);

// Line-oriented key=value report. Wall times appear only as trailing
// " time_us=<int>" fields of batch lines.
std::string format_report(const RunReport& report);
nlohmann::json report_json(const RunReport& report);

// Removes every " time_us=<int>" field.
std::string strip_times(std::string_view report);

}  // namespace dyncon::harness
