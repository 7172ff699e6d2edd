#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treetrace {

/// Index of an element inside a FiniteGroup. The identity is always 0.
using Element = int;

/// Permutation in one-line notation: perm[x] is the image of point x.
using Permutation = std::vector<int>;

/// A finite group stored as a validated multiplication table.
///
/// Instances are immutable after construction. Element 0 is the identity.
/// Groups built from permutations multiply as function composition,
/// (p*q)[x] = p[q[x]], so q is applied first.
class FiniteGroup {
 public:
  /// Validates a Cayley table (identity, inverses, associativity) and
  /// relabels the identity to index 0 when it sits elsewhere. Throws
  /// GroupAxiomError naming a witness.
  static FiniteGroup from_table(const std::vector<std::vector<int>>& table,
                                std::vector<std::string> labels = {});

  /// Closure-enumerates the group generated by the given permutations.
  /// Elements are numbered in breadth-first discovery order from the
  /// identity, trying generators in the given order.
  static FiniteGroup from_permutations(const std::vector<Permutation>& generators);

  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric(int degree);

  int order() const noexcept { return order_; }
  Element identity() const noexcept { return 0; }
  Element mul(Element a, Element b) const { return table_[a * order_ + b]; }
  Element inv(Element a) const { return inverses_[a]; }
  Element conjugate(Element g, Element x) const { return mul(mul(g, x), inv(g)); }
  int element_order(Element a) const;

  const std::string& label(Element a) const { return labels_[a]; }
  /// Returns the element with this label, if any.
  std::optional<Element> find_label(const std::string& label) const;

  bool is_permutation_group() const noexcept { return !permutations_.empty(); }
  const Permutation& permutation(Element a) const { return permutations_.at(a); }
  std::optional<Element> find_permutation(const Permutation& p) const;

  bool operator==(const FiniteGroup& other) const { return table_ == other.table_; }

 private:
  FiniteGroup() = default;
  void build_inverses();

  int order_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverses_;
  std::vector<std::string> labels_;
  std::vector<Permutation> permutations_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr make_group(FiniteGroup g) {
  return std::make_shared<const FiniteGroup>(std::move(g));
}

/// Validates a Cayley table; same as FiniteGroup::from_table.
FiniteGroup check_group_axioms(const std::vector<std::vector<int>>& table);

struct Subgroup {
  GroupPtr parent;
  std::vector<Element> members;  // sorted, contains 0

  int order() const { return static_cast<int>(members.size()); }
  bool contains(Element a) const;
  int index() const { return parent->order() / order(); }
};

/// Smallest subgroup containing the generators.
Subgroup subgroup_generated(const GroupPtr& group, std::span<const Element> generators);

/// Validates an explicit element list as a subgroup (ValidationError otherwise).
Subgroup make_subgroup(const GroupPtr& group, std::vector<Element> members);

/// Every subgroup of a small group, ordered by (order, members).
std::vector<Subgroup> all_subgroups(const GroupPtr& group);

/// The subgroup as a group in its own right; element i is members[i] and
/// labels are inherited.
GroupPtr subgroup_as_group(const Subgroup& sub);

enum class CosetSide { Left, Right };

/// One representative per coset of a subgroup; the representative is the
/// minimal element index of its coset, so reps[0] == 0.
struct Transversal {
  Subgroup subgroup;
  CosetSide side = CosetSide::Right;
  std::vector<Element> reps;
  std::vector<int> coset_of;  // element -> position in reps

  Element rep_of(Element a) const { return reps[coset_of[a]]; }

  /// Splits a as u*rep (right cosets Ua) or rep*u (left cosets aU) with u in
  /// the subgroup. Returns {u, rep}.
  std::pair<Element, Element> decompose(Element a) const;
};

Transversal build_transversal(const Subgroup& subgroup, CosetSide side);

/// A validated homomorphism between finite groups.
struct GroupHom {
  GroupPtr source;
  GroupPtr target;
  std::vector<Element> images;

  Element operator()(Element a) const { return images[a]; }
};

/// Checks images[0] == 0 and multiplicativity; throws ValidationError with a
/// witness pair otherwise.
GroupHom make_hom(GroupPtr source, GroupPtr target, std::vector<Element> images);

GroupHom identity_hom(const GroupPtr& group);

/// Extends generator images to a homomorphism on the subgroup they
/// generate. Throws ValidationError if the images are inconsistent or the
/// generators do not generate the whole source.
GroupHom hom_from_generators(GroupPtr source, GroupPtr target,
                             std::span<const std::pair<Element, Element>> images);

struct InjectivityResult {
  bool injective = true;
  std::optional<std::pair<Element, Element>> witness;  // distinct, same image

  explicit operator bool() const { return injective; }
};

/// True iff hom is injective on sub. Throws SubgroupNotInSource when sub
/// does not live in hom.source.
InjectivityResult is_injective_on(const GroupHom& hom, const Subgroup& sub);

}  // namespace treetrace
