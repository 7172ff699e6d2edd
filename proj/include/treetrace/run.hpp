#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "treetrace/scenario.hpp"

namespace treetrace {

/// Command-line overrides of a scenario's run block.
struct RunOptions {
  std::optional<std::vector<std::string>> suites;
  std::optional<int> radius;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

struct Counterexample {
  std::size_t trial = 0;
  nlohmann::json detail;
};

enum class SuiteStatus { Passed, Failed, Error, BudgetExceeded, Skipped };

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::Passed;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string error;  // message when status is Error or BudgetExceeded
  bool input_error = false;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Counterexample> counterexamples;  // the first few failures
  double ms = 0;

  nlohmann::json to_json(bool timing) const;
};

struct RunReport {
  std::string scenario;
  std::string kind;
  RunParameters parameters;
  std::vector<SuiteResult> suites;  // sorted by name

  bool passed() const;
  /// 0 all passed, 2 input error, 1 counterexample or suite error,
  /// 3 budget exceeded; the first applicable code in that order wins.
  int exit_code() const;
  nlohmann::json to_json(bool timing = true) const;
  std::string to_text(bool timing = true) const;
};

/// Suites run when neither the scenario nor the options choose any.
std::vector<std::string> default_suites(const Scenario& scenario);

/// Trial i of a suite draws from SplitMix64::stream(seed, (suite << 32) | i)
/// where suite is the position of its name in known_suites().
SuiteResult run_suite(const Scenario& scenario, const std::string& suite, const RunParameters& params);

/// Runs the selected suites in name order. Suite errors are recorded and
/// never abort the remaining suites.
RunReport run(const Scenario& scenario, const RunOptions& options = {});

nlohmann::json to_json(const RunParameters& params);

}  // namespace treetrace
