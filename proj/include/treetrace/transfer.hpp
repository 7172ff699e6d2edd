#pragma once

#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "treetrace/bass_serre_tree.hpp"
#include "treetrace/group_ring.hpp"
#include "treetrace/orbit_operator.hpp"

namespace treetrace {

using DeltaOperator = OrbitOperator<TreeVertex>;
using OmegaOperator = OrbitOperator<OmegaIndex>;
using DeltaVector = OrbitVector<TreeVertex>;
using OmegaVector = OrbitVector<OmegaIndex>;

/// a acting on V x H by g(v, u) = (gv, alpha(g) u), restricted to columns.
DeltaOperator lift_to_delta(const BassSerreTree& tree, const GGroupRingElement& a,
                            const std::set<TreeVertex>& columns);
/// Same on (E + {*}) x H; every * column is zero.
OmegaOperator lift_to_omega(const BassSerreTree& tree, const GGroupRingElement& a,
                            const std::set<OmegaIndex>& columns);

/// The lifts applied to vectors without materializing an operator.
DeltaVector apply_delta(const BassSerreTree& tree, const GGroupRingElement& a, const DeltaVector& x);
OmegaVector apply_omega(const BassSerreTree& tree, const GGroupRingElement& a, const OmegaVector& x);

/// phi^* on vectors: the Omega index x goes to julg_valette_inverse(x).
DeltaVector pull_back(const BassSerreTree& tree, const OmegaVector& x);

struct DefectOperator {
  DeltaOperator op;
  /// Union of the defect sets of supp(a), plus v0. Every other column of
  /// a_Delta - phi^* a_Omega phi vanishes.
  std::set<TreeVertex> support;
  /// False if some defect set escaped its geodesic in a scanned ball.
  bool certified = true;
};

/// a_Delta - phi^* a_Omega phi on its finite column support. With
/// scan_radius set, every defect set is recomputed over the ball of that
/// radius and checked against its geodesic (RadiusTooSmall if the ball is
/// too small); otherwise only geodesic vertices are examined.
DefectOperator defect_operator(const BassSerreTree& tree, const GGroupRingElement& a,
                               std::optional<int> scan_radius = std::nullopt);

struct TransferReport {
  std::string element;
  GaussianRational lhs;  // r * tr_G(a)
  GaussianRational rhs;  // tr_H of the defect, summed over r orbits
  int r = 1;
  bool equal = false;
  std::size_t support = 0;
  bool certified = true;
  double ms = 0;

  nlohmann::json to_json(bool timing = true) const;
};

/// Checks tr_G(a) = tr_H(a_Delta - phi^* a_Omega phi). The tree
/// construction has one H-orbit of extra points, so r = 1. A larger r is
/// the synthetic case of r disjoint copies, each written in an independently
/// rebased basis drawn from seed.
TransferReport verify_transfer(const BassSerreTree& tree, const GGroupRingElement& a, int r = 1,
                               std::uint64_t seed = 0);

/// <gx, gy> = <x, y> for the action g(v, u) = (gv, alpha(g) u).
bool inner_product_invariance(const BassSerreTree& tree, const DeltaVector& x, const DeltaVector& y,
                              const NormalForm& g);
DeltaVector act_vector(const BassSerreTree& tree, const NormalForm& g, const DeltaVector& x);

/// tr_H(xy) = tr_H(yx); IncompatibleSupports unless rows of each factor lie
/// in the columns of the other.
template <class Index>
bool trace_cyclicity(const OrbitOperator<Index>& x, const OrbitOperator<Index>& y) {
  return tr_H_orbit(product(x, y)) == tr_H_orbit(product(y, x));
}

inline constexpr int kDefaultMaxDegree = 6;
inline constexpr std::size_t kDefaultMaxPolySupport = 20000;

struct PolynomialReport {
  TransferReport transfer;    // for p(a) in CG, through defect_operator
  GaussianRational constant;  // c = p(0)
  /// tr_H(p(A_Delta) - phi^* p(A_Omega) phi); equals tr_G(p(a)) - c.
  GaussianRational lazy_trace;
  bool routes_agree = false;     // lazy columns = defect columns - c E(v0, v0)
  bool support_certified = false;  // lazy columns vanish next to the support
  bool corrected_equal = false;    // lazy_trace + c = tr_G(p(a))

  bool passed() const { return transfer.equal && routes_agree && support_certified && corrected_equal; }
  nlohmann::json to_json(bool timing = true) const;
};

/// Polynomial calculus as a stand-in for the holomorphic one. Route one
/// evaluates p(a) in CG and builds its defect operator. Route two applies
/// p(A_Delta) and p(A_Omega) (unital, so c acts on the * column too) to
/// basis vectors lazily over the support and its neighbours.
/// BudgetExceeded if deg p > max_degree or p(a) has too many terms.
PolynomialReport polynomial_calculus_defect(const BassSerreTree& tree, const GGroupRingElement& a,
                                            const Polynomial& p, int max_degree = kDefaultMaxDegree,
                                            std::size_t max_support = kDefaultMaxPolySupport);

/// Averaging idempotents over every subgroup of every vertex group.
std::vector<GGroupRingElement> vertex_group_idempotents(const std::shared_ptr<const GraphOfGroups>& spec);

}  // namespace treetrace
