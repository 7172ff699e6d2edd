// treetrace: scenario-driven verification runs, ball export and single traces.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treetrace/bass_serre_tree.hpp"
#include "treetrace/errors.hpp"
#include "treetrace/run.hpp"
#include "treetrace/scenario.hpp"
#include "treetrace/transfer.hpp"

namespace {

using namespace treetrace;

constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct VerifyArgs {
  std::string scenario;
  std::optional<std::string> suites;  // comma-separated
  std::optional<int> radius, trials;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string format = "json";
  bool no_timing = false;
};

int verify(const VerifyArgs& args) {
  Scenario s = parse_scenario(args.scenario);
  RunOptions options;
  if (args.suites) {
    // --suites "" selects nothing; unknown names surface as input errors in the report.
    options.suites.emplace();
    std::istringstream in(*args.suites);
    for (std::string name; std::getline(in, name, ',');)
      if (!name.empty()) options.suites->push_back(name);
  }
  options.radius = args.radius;
  options.trials = args.trials;
  options.seed = args.seed;
  RunReport report = run(s, options);
  const bool timing = !args.no_timing;
  const std::string body = args.format == "json" ? report.to_json(timing).dump(2) + "\n" : report.to_text(timing);
  if (args.report.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(args.report, std::ios::binary);
    if (!out) throw ParseError(0, "cannot write " + args.report);
    out << body;
    std::cerr << report.scenario << ": " << (report.passed() ? "passed" : "FAILED") << " (exit "
              << report.exit_code() << ")\n";
  }
  return report.exit_code();
}

int export_ball(const std::string& path, int radius, const std::string& format) {
  Scenario s = parse_scenario(path);
  if (!s.has_tree()) throw ValidationError("scenario '" + s.name + "' has no Bass-Serre tree");
  BassSerreTree tree(s.spec, std::nullopt, s.run.budget);
  std::cout << (format == "dot" ? tree.export_dot(radius) : tree.export_text(radius));
  return 0;
}

int compute_trace(const std::string& path, const std::string& word, bool no_timing) {
  Scenario s = parse_scenario(path);
  if (!s.has_tree()) throw ValidationError("scenario '" + s.name + "' has no Bass-Serre tree");
  const auto letters = s.parse_word(word);
  NormalForm g = s.spec->normalize(letters);
  BassSerreTree tree(s.spec, std::nullopt, s.run.budget);
  TransferReport rep = verify_transfer(tree, GGroupRingElement::basis(s.spec, g));
  std::cout << rep.to_json(!no_timing).dump(2) << '\n';
  return rep.equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact transfer-trace and index verification on Bass-Serre trees"};
  app.require_subcommand(1);

  VerifyArgs v;
  auto* verify_cmd = app.add_subcommand("verify", "Run verification suites on a scenario");
  verify_cmd->add_option("--scenario", v.scenario, "Scenario JSON file")->required();
  verify_cmd->add_option("--suites", v.suites, "Comma-separated subset of cyclicity,index,jv,norms,poly,transfer");
  verify_cmd->add_option("--radius", v.radius, "Ball radius for the jv suite")->check(CLI::Range(0, 12));
  verify_cmd->add_option("--trials", v.trials, "Random trials for transfer and jv")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", v.seed, "PRNG seed");
  verify_cmd->add_option("--report", v.report, "Write the report to this file");
  verify_cmd->add_option("--format", v.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  verify_cmd->add_flag("--no-timing", v.no_timing, "Omit timings so reports are byte-stable");

  std::string ball_scenario, ball_format = "text";
  int ball_radius = 2;
  auto* ball_cmd = app.add_subcommand("export-ball", "Print a ball of the Bass-Serre tree");
  ball_cmd->add_option("--scenario", ball_scenario, "Scenario JSON file")->required();
  ball_cmd->add_option("--radius", ball_radius, "Ball radius")->required()->check(CLI::Range(0, 12));
  ball_cmd->add_option("--format", ball_format, "Output format")->check(CLI::IsMember({"dot", "text"}));

  std::string trace_scenario, trace_word;
  bool trace_no_timing = false;
  auto* trace_cmd = app.add_subcommand("compute-trace", "Transfer identity for one group element");
  trace_cmd->add_option("--scenario", trace_scenario, "Scenario JSON file")->required();
  trace_cmd->add_option("--element", trace_word, "Whitespace-separated word in the scenario's letters")->required();
  trace_cmd->add_flag("--no-timing", trace_no_timing, "Omit the timing field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*verify_cmd) return verify(v);
    if (*ball_cmd) return export_ball(ball_scenario, ball_radius, ball_format);
    return compute_trace(trace_scenario, trace_word, trace_no_timing);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const treetrace::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
