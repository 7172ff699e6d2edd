#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "treetrace/finite_group.hpp"
#include "treetrace/graph_of_groups.hpp"

namespace treetrace::testing {

inline GroupPtr s3() { return make_group(FiniteGroup::symmetric(3)); }
inline GroupPtr cyclic(int n) { return make_group(FiniteGroup::cyclic(n)); }

/// First element of order 2 in a group.
inline Element first_involution(const FiniteGroup& g) {
  for (Element a = 1; a < g.order(); ++a)
    if (g.element_order(a) == 2) return a;
  return 0;
}

inline Element first_of_order(const FiniteGroup& g, int k) {
  for (Element a = 1; a < g.order(); ++a)
    if (g.element_order(a) == k) return a;
  return 0;
}

/// S3 *_{C2} S3 with the fold map.
inline std::shared_ptr<const GraphOfGroups> s3_double() {
  auto h = s3();
  Element s = first_involution(*h);
  std::vector<Element> gens{s};
  return std::make_shared<const GraphOfGroups>(
      GraphOfGroups::double_of(h, subgroup_generated(h, gens)));
}

/// HNN(S3, C3, conjugation by a transposition).
inline std::shared_ptr<const GraphOfGroups> s3_hnn() {
  auto h = s3();
  std::vector<Element> gens{first_of_order(*h, 3)};
  return std::make_shared<const GraphOfGroups>(
      GraphOfGroups::conjugation_hnn(h, subgroup_generated(h, gens), first_involution(*h)));
}

/// C2 * C2 (infinite dihedral) with the fold map onto C2.
inline std::shared_ptr<const GraphOfGroups> infinite_dihedral() {
  auto h = cyclic(2);
  return std::make_shared<const GraphOfGroups>(
      GraphOfGroups::double_of(h, Subgroup{h, {0}}));
}

/// A letter of B outside U (amalgams only).
inline NormalForm b_outside_u(const GraphOfGroups& spec) {
  return spec.letter(RawLetter::b(spec.right_transversal(1).reps.at(1)));
}

}  // namespace treetrace::testing
