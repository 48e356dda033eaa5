#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>

#include "CLI11.hpp"
#include "runner.hpp"
#include "stats.hpp"
#include "workload.hpp"

namespace dyncon::harness {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void parse_mix(const std::string& mix, GenerateOptions& o) {
  double parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = mix.find(':', pos);
    if ((i < 2) == (colon == std::string::npos)) throw InputError("--mix expects I:D:Q");
    const std::string piece = mix.substr(pos, i < 2 ? colon - pos : std::string::npos);
    try {
      std::size_t used = 0;
      parts[i] = std::stod(piece, &used);
      if (used != piece.size()) throw InputError("--mix expects I:D:Q");
    } catch (const std::logic_error&) {
      throw InputError("--mix expects I:D:Q");
    }
    pos = colon + 1;
  }
  o.insert_ratio = parts[0];
  o.delete_ratio = parts[1];
  o.query_ratio = parts[2];
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Batch-dynamic graph connectivity harness", "dyncon"};
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string mix = "1:0:0";
  std::string gen_out;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a random workload script");
  generate_cmd->add_option("-n,--n", gen.n, "Vertex count")->required();
  generate_cmd->add_option("-b,--batches", gen.batches, "Number of batches")->required();
  generate_cmd->add_option("-d,--delta", gen.delta, "Average batch size")->required();
  generate_cmd->add_option("--mix", mix, "Insert:delete:query ratios")->capture_default_str();
  generate_cmd->add_option("--spread", gen.spread, "Batch size jitter in [0, 1]")
      ->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate_cmd->add_option("-o,--out", gen_out, "Output path (stdout when omitted)");

  std::string script_path;
  std::string strategy_name = "simple";
  std::string verify_name = "none";
  std::optional<std::uint64_t> run_seed;
  unsigned threads = 1;
  std::string run_out;
  std::string run_json;
  CLI::App* run_cmd = app.add_subcommand("run", "Replay a workload script");
  run_cmd->add_option("script", script_path, "Script path")->required();
  run_cmd->add_option("--strategy", strategy_name, "simple|interleaved")->capture_default_str();
  run_cmd->add_option("--verify", verify_name, "none|oracle|full-audit")->capture_default_str();
  run_cmd->add_option("--seed", run_seed, "Engine seed (script seed when omitted)");
  run_cmd->add_option("--threads", threads, "Worker-count hint; 1 is sequential")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("-o,--out", run_out, "Report path (stdout when omitted)");
  run_cmd->add_option("--json", run_json, "Also write a JSON report here");

  std::vector<std::string> reports;
  std::string stats_out;
  std::string stats_json;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Summarize run reports");
  stats_cmd->add_option("reports", reports, "Report paths")->required();
  stats_cmd->add_option("-o,--out", stats_out, "Summary path (stdout when omitted)");
  stats_cmd->add_option("--json", stats_json, "Also write a JSON summary here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*generate_cmd) {
      parse_mix(mix, gen);
      emit(serialize(generate(gen)), gen_out, out);
      return kExitOk;
    }
    if (*run_cmd) {
      RunOptions options;
      const auto strategy = parse_strategy(strategy_name);
      if (!strategy) throw InputError("unknown strategy " + strategy_name);
      const auto verify = parse_verify(verify_name);
      if (!verify) throw InputError("unknown verify mode " + verify_name);
      options.strategy = *strategy;
      options.verify = *verify;
      options.threads = threads;
      options.seed = run_seed;
      const RunReport report = run_script(read_script_file(script_path), options);
      emit(format_report(report), run_out, out);
      if (!run_json.empty()) write_text_file(run_json, report_json(report).dump(2) + "\n");
      if (!report.verified()) {
        for (const std::string& f : report.failures) err << "verification failed: " << f << '\n';
        return kExitVerifyFailed;
      }
      return kExitOk;
    }
    std::ostringstream text;
    nlohmann::json all = nlohmann::json::array();
    std::vector<Summary> summaries;
    for (const std::string& path : reports) {
      summaries.push_back(summarize(parse_report(read_text_file(path))));
      if (reports.size() > 1) text << "report=" << path << '\n';
      text << format_summary(summaries.back());
      nlohmann::json j = summary_json(summaries.back());
      j["report"] = path;
      all.push_back(std::move(j));
    }
    if (summaries.size() > 1) {
      std::vector<std::size_t> order(summaries.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return summaries[a].delta < summaries[b].delta;
      });
      for (std::size_t i : order) {
        text << "sweep delta=" << std::fixed << std::setprecision(6) << summaries[i].delta
             << " pushes_per_deleted_edge=" << summaries[i].pushes_per_deleted_edge
             << " report=" << reports[i] << '\n';
      }
    }
    emit(text.str(), stats_out, out);
    if (!stats_json.empty()) {
      write_text_file(stats_json, (all.size() == 1 ? all[0] : all).dump(2) + "\n");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace dyncon::harness
