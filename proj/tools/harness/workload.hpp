#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dyncon/oracle.hpp"
#include "dyncon/types.hpp"

namespace dyncon::harness {

struct Batch {
  BatchKind kind = BatchKind::kQuery;
  std::vector<Edge> edges;

  friend bool operator==(const Batch&, const Batch&) = default;
};

// Text form:
//   # n=<int> seed=<int>
//   B I|D|Q
//   E u v
//   ...
struct Script {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::vector<Batch> batches;

  friend bool operator==(const Script&, const Script&) = default;
};

class ScriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize(const Script& script);
// Throws ScriptError with the offending line number.
Script parse_script(std::string_view text);

Script read_script_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

struct GenerateOptions {
  std::size_t n = 16;
  std::size_t batches = 1;
  std::size_t delta = 1;  // mean batch size, for every batch type
  double insert_ratio = 1.0;
  double delete_ratio = 0.0;
  double query_ratio = 0.0;
  // Batch sizes come in pairs delta +- j with j uniform in [0, spread*(delta-1)],
  // so each type averages exactly delta over complete pairs.
  double spread = 0.0;
  std::uint64_t seed = 0;
};

class GenerateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Deletions only target live edges; a delete batch that the live set cannot
// cover is postponed behind an insert batch. Throws GenerateError for
// infeasible parameters.
Script generate(const GenerateOptions& options);

}  // namespace dyncon::harness
