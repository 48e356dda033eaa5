#include "stats.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dyncon::harness {

namespace {

std::uint64_t to_u64(std::string_view text, std::string_view key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed value for " + std::string(key));
  }
  return out;
}

// Value of " key=" inside a space-separated line.
std::string_view field(std::string_view line, std::string_view key) {
  const std::string needle = " " + std::string(key) + "=";
  const std::size_t at = line.find(needle);
  if (at == std::string_view::npos) throw std::invalid_argument("missing field " + std::string(key));
  std::string_view rest = line.substr(at + needle.size());
  return rest.substr(0, rest.find(' '));
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

double ratio(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace

ReportCounters parse_report(std::string_view text) {
  ReportCounters c;
  bool run = false, m = false, k = false, p = false, d = false;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(end == std::string_view::npos ? text.size() : end + 1);

    auto counter = [&](std::string_view key, std::uint64_t& out, bool& seen) {
      const std::string prefix = "counter." + std::string(key) + "=";
      if (line.substr(0, prefix.size()) != prefix) return false;
      out = to_u64(line.substr(prefix.size()), key);
      seen = true;
      return true;
    };
    if (line.substr(0, 4) == "run ") {
      c.n = to_u64(field(line, "n"), "n");
      c.levels = to_u64(field(line, "L"), "L");
      run = true;
    } else if (counter("m", c.inserted, m) || counter("K", c.deleted, k) ||
               counter("P", c.pushes, p) || counter("d", c.deletion_batches, d)) {
    } else if (line.substr(0, 7) == "rounds ") {
      const std::uint64_t level = to_u64(field(line, "level"), "level");
      if (level == 0) throw std::invalid_argument("rounds level must be positive");
      if (c.rounds_per_level.size() < level) c.rounds_per_level.resize(level);
      c.rounds_per_level[level - 1] = to_u64(field(line, "count"), "count");
    } else if (line.substr(0, 7) == "pushes ") {
      std::vector<std::uint64_t> row;
      std::string_view list = field(line, "p");
      while (!list.empty()) {
        const std::size_t comma = list.find(',');
        row.push_back(to_u64(list.substr(0, comma), "p"));
        list.remove_prefix(comma == std::string_view::npos ? list.size() : comma + 1);
      }
      c.batch_pushes.push_back(std::move(row));
    }
  }
  if (!run || !m || !k || !p || !d) throw std::invalid_argument("not a run report");
  return c;
}

Summary summarize(const ReportCounters& c) {
  Summary s;
  s.counters = c;
  s.bound = c.inserted * c.levels;
  s.slack = static_cast<std::int64_t>(s.bound) - static_cast<std::int64_t>(c.pushes);
  s.delta = ratio(c.deleted, c.deletion_batches);
  s.pushes_per_deleted_edge = ratio(c.pushes, c.deleted);
  s.level_decreases_per_edge = ratio(c.pushes, c.inserted);
  return s;
}

std::string format_summary(const Summary& s) {
  const ReportCounters& c = s.counters;
  std::ostringstream os;
  os << "n=" << c.n << '\n'
     << "L=" << c.levels << '\n'
     << "m=" << c.inserted << '\n'
     << "K=" << c.deleted << '\n'
     << "d=" << c.deletion_batches << '\n'
     << "delta=" << fixed(s.delta) << '\n'
     << "P=" << c.pushes << '\n'
     << "bound=" << s.bound << '\n'
     << "slack=" << s.slack << '\n'
     << "within_bound=" << (s.slack >= 0 ? "yes" : "no") << '\n'
     << "level_decreases_per_edge=" << fixed(s.level_decreases_per_edge) << '\n'
     << "pushes_per_deleted_edge=" << fixed(s.pushes_per_deleted_edge) << '\n';
  for (std::size_t i = 0; i < c.rounds_per_level.size(); ++i) {
    os << "rounds level=" << i + 1 << " count=" << c.rounds_per_level[i] << '\n';
  }
  std::vector<std::uint64_t> per_level;
  for (const auto& row : c.batch_pushes) {
    if (per_level.size() < row.size()) per_level.resize(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) per_level[i] += row[i];
  }
  for (std::size_t i = 0; i < per_level.size(); ++i) {
    os << "pushes level=" << i + 1 << " total=" << per_level[i] << '\n';
  }
  return os.str();
}

nlohmann::json summary_json(const Summary& s) {
  const ReportCounters& c = s.counters;
  return {{"n", c.n},
          {"L", c.levels},
          {"m", c.inserted},
          {"K", c.deleted},
          {"d", c.deletion_batches},
          {"delta", s.delta},
          {"P", c.pushes},
          {"bound", s.bound},
          {"slack", s.slack},
          {"level_decreases_per_edge", s.level_decreases_per_edge},
          {"pushes_per_deleted_edge", s.pushes_per_deleted_edge},
          {"rounds_per_level", c.rounds_per_level},
          {"pushes", c.batch_pushes}};
}

}  // namespace dyncon::harness
