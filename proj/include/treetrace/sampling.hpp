#pragma once

#include <vector>

#include "treetrace/graph_of_groups.hpp"
#include "treetrace/random.hpp"

namespace treetrace {

/// Random raw word with exactly `length` letters. Amalgam letters are drawn
/// uniformly from A and B; hnn letters are the stable letter (either sign)
/// with probability 1/2, otherwise a uniform element of H.
std::vector<RawLetter> random_raw_word(const GraphOfGroups& spec, SplitMix64& rng, int length);

/// Normal form of a random raw word of length 1..max_length.
NormalForm random_element(const GraphOfGroups& spec, SplitMix64& rng, int max_length);

}  // namespace treetrace
