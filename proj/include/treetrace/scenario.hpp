#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treetrace/graph_of_groups.hpp"

namespace treetrace {

/// Parameters of a verification run; every field can be set in the
/// scenario's "run" block.
struct RunParameters {
  std::uint64_t seed = 1;
  int radius = 5;
  int trials = 500;
  int max_support = 8;
  int max_word_length = 4;
  int max_degree = 3;
  int poly_trials = 50;
  int poly_max_support = 8;
  int poly_max_word_length = 4;
  int cyclicity_trials = 100;
  int index_pairs = 200;
  int index_m = 4;
  int index_n = 2;
  int norm_trials = 100;
  int norm_m = 2;
  int norm_n = 2;
  std::size_t budget = 200000;
  /// Unset means the defaults for the scenario kind.
  std::optional<std::vector<std::string>> suites;
};

struct Scenario {
  std::string name;
  std::string kind;  // "amalgam", "hnn" or "synthetic_index"
  std::shared_ptr<const GraphOfGroups> spec;  // null for synthetic_index
  GroupPtr H;
  std::map<std::string, RawLetter> letters;  // declared letter labels
  RunParameters run;

  bool has_tree() const { return spec != nullptr; }
  /// Whitespace-separated letters: declared labels, A<i>, B<i>, H<i>, t, T
  /// (= t^-1) or 1, each optionally suffixed with ^-1. Throws ValidationError.
  std::vector<RawLetter> parse_word(std::string_view word) const;
};

/// Throws ParseError for malformed JSON or fields of the wrong shape, and
/// ValidationError (prefixed with the line and JSON pointer) when the data
/// do not describe a valid subdued graph of groups.
Scenario parse_scenario_text(std::string_view text);
Scenario parse_scenario(const std::filesystem::path& path);

const std::vector<std::string>& known_suites();

}  // namespace treetrace
