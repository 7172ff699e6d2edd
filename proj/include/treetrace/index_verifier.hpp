#pragma once

#include <cstdint>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "treetrace/h_module.hpp"
#include "treetrace/random.hpp"

namespace treetrace {

struct IndexReport {
  GaussianRational trace_diff;  // tr_H(P - Q)
  mpq_class dim_ker;            // dim_H ker(QP: PE -> QE)
  mpq_class dim_coker;          // dim_H ker(PQ: QE -> PE)
  mpq_class index;
  GaussianRational trace_p_defect;  // tr_H(P - PQP)
  GaussianRational trace_q_defect;  // tr_H(Q - QPQ)
  GaussianRational trace_t0;        // tr_H(P - PQP) - dim_ker
  GaussianRational trace_t1;        // tr_H(Q - QPQ) - dim_coker
  int rank_p = 0, rank_q = 0, rank_qp = 0, rank_pq = 0;
  /// trace_diff = index and trace_diff = trace_p_defect - trace_q_defect.
  bool equal = false;

  friend bool operator==(const IndexReport&, const IndexReport&) = default;
  nlohmann::json to_json() const;
};

/// Throws NotAProjection naming the matrix and the first offending entry.
void validate_projection(const HModuleMatrix& p, const char* name);

/// Checks tr_H(P - Q) = dim_H ker(QP) - dim_H coker(QP) with exact ranks.
IndexReport h_index(const HModuleMatrix& p, const HModuleMatrix& q);

struct ProjectionPair {
  HModuleMatrix p, q;
};

/// Largest |H| * n * m accepted by generate_projection_pair.
inline constexpr int kMaxScalarDimension = 512;

/// Deterministic pair of distinct exact projections on (CH)^(n*m): diagonal
/// sums of 0, 1 and conjugated averaging idempotents, each conjugated by a
/// unitary made from a monomial matrix (signed permutation times group
/// elements) and rational rotations.
ProjectionPair generate_projection_pair(std::uint64_t seed, const GroupPtr& group, int m, int n = 1);

/// Unitary monomial matrix: signs in {1, -1, i, -i}, a random permutation of
/// the summands and a group element on each.
HModuleMatrix random_monomial_unitary(SplitMix64& rng, const GroupPtr& group, int m, int n = 1);

struct KasparovReport {
  bool self_adjoint = false;     // F* = F
  bool square_is_diagonal = false;  // F*F = F^2 = FF* = diag(PQP, QPQ)
  int rank_p_defect = 0;         // rank(P - PQP)
  int rank_q_defect = 0;         // rank(Q - QPQ)
  int rank_difference = 0;       // rank(P - Q)
  bool passed() const {
    return self_adjoint && square_is_diagonal && rank_p_defect <= rank_difference &&
           rank_q_defect <= rank_difference;
  }
  nlohmann::json to_json() const;
};

/// F = [[0, PQ], [QP, 0]] on PE + QE. Throws NotAProjection.
KasparovReport kasparov_compactness_check(const HModuleMatrix& p, const HModuleMatrix& q);

struct NormReport {
  double trace_sum = 0;      // |tr_H(A + B)|
  double trace_bound = 0;    // tr_H|A| + tr_H|B|
  double product_trace = 0;  // tr_H|CAB|
  double product_bound = 0;  // ||C|| ||B|| tr_H|A|
  double relative_tolerance = 1e-9;
  bool triangle_ok = false;
  bool product_ok = false;
  bool passed() const { return triangle_ok && product_ok; }
  nlohmann::json to_json() const;
};

/// Floating-point check of |tr_H(A+B)| <= tr_H|A| + tr_H|B| and
/// tr_H|CAB| <= ||C|| ||B|| tr_H|A|, each up to tolerance * max(1, rhs).
/// Throws NumericalFailure if an eigensolver fails.
NormReport norm_inequalities_check(const HModuleMatrix& a, const HModuleMatrix& b, const HModuleMatrix& c,
                                   double relative_tolerance = 1e-9);

/// Random matrix with about density * size^2 nonzero entries, each a short
/// random combination of group elements.
HModuleMatrix random_module_matrix(SplitMix64& rng, const GroupPtr& group, int m, int n = 1,
                                   double density = 0.5);

}  // namespace treetrace
