#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dyncon::harness {

// Counters recovered from a text report.
struct ReportCounters {
  std::uint64_t n = 0;
  std::uint64_t levels = 0;
  std::uint64_t inserted = 0;  // m
  std::uint64_t deleted = 0;   // K
  std::uint64_t pushes = 0;    // P
  std::uint64_t deletion_batches = 0;
  std::vector<std::uint64_t> rounds_per_level;
  std::vector<std::vector<std::uint64_t>> batch_pushes;
};

struct Summary {
  ReportCounters counters;
  std::uint64_t bound = 0;  // m * L
  std::int64_t slack = 0;   // bound - P
  double delta = 0;         // K / d
  double pushes_per_deleted_edge = 0;
  double level_decreases_per_edge = 0;  // P / m
};

// Throws std::invalid_argument when a required counter line is missing.
ReportCounters parse_report(std::string_view text);
Summary summarize(const ReportCounters& counters);

std::string format_summary(const Summary& summary);
nlohmann::json summary_json(const Summary& summary);

}  // namespace dyncon::harness
