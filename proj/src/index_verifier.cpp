#include "treetrace/index_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "treetrace/errors.hpp"

namespace treetrace {

namespace {

std::string q_str(const mpq_class& q) { return q.get_str(); }

int rank_of(const HModuleMatrix& x) { return exact_rank(regular_representation(x)); }

}  // namespace

void validate_projection(const HModuleMatrix& p, const char* name) {
  if (auto d = p.first_difference(p * p))
    throw NotAProjection(std::string(name) + "^2 != " + name + " at entry (" + std::to_string(d->first) +
                         ", " + std::to_string(d->second) + ")");
  if (auto d = p.first_difference(p.adjoint()))
    throw NotAProjection(std::string(name) + "* != " + name + " at entry (" + std::to_string(d->first) +
                         ", " + std::to_string(d->second) + ")");
}

IndexReport h_index(const HModuleMatrix& p, const HModuleMatrix& q) {
  validate_projection(p, "P");
  validate_projection(q, "Q");
  const int order = p.group()->order();
  const HModuleMatrix qp = q * p, pq = p * q;

  IndexReport r;
  r.rank_p = rank_of(p);
  r.rank_q = rank_of(q);
  r.rank_qp = rank_of(qp);
  r.rank_pq = rank_of(pq);
  // QP vanishes off PE, so its rank on PE is its full rank; likewise PQ.
  r.dim_ker = mpq_class(r.rank_p - r.rank_qp, order);
  r.dim_coker = mpq_class(r.rank_q - r.rank_pq, order);
  r.dim_ker.canonicalize();
  r.dim_coker.canonicalize();
  r.index = r.dim_ker - r.dim_coker;
  r.trace_diff = h_trace(p - q);
  r.trace_p_defect = h_trace(p - pq * p);
  r.trace_q_defect = h_trace(q - qp * q);
  r.trace_t0 = r.trace_p_defect - GaussianRational(r.dim_ker);
  r.trace_t1 = r.trace_q_defect - GaussianRational(r.dim_coker);
  r.equal = r.trace_diff == GaussianRational(r.index) && r.trace_diff == r.trace_p_defect - r.trace_q_defect;
  return r;
}

nlohmann::json IndexReport::to_json() const {
  return {{"trace_diff", trace_diff.to_string()},
          {"dim_ker", q_str(dim_ker)},
          {"dim_coker", q_str(dim_coker)},
          {"index", q_str(index)},
          {"trace_p_defect", trace_p_defect.to_string()},
          {"trace_q_defect", trace_q_defect.to_string()},
          {"trace_t0", trace_t0.to_string()},
          {"trace_t1", trace_t1.to_string()},
          {"ranks", {{"P", rank_p}, {"Q", rank_q}, {"QP", rank_qp}, {"PQ", rank_pq}}},
          {"equal", equal}};
}

HModuleMatrix random_monomial_unitary(SplitMix64& rng, const GroupPtr& group, int m, int n) {
  HModuleMatrix w(group, m, n);
  std::vector<int> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = w.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  static const GaussianRational signs[] = {GaussianRational(1), GaussianRational(-1), GaussianRational::i(),
                                           -GaussianRational::i()};
  for (int i = 0; i < w.size(); ++i)
    w.at(perm[i], i) = GroupAlgebraElement::basis(group, static_cast<Element>(rng.below(group->order())),
                                                  signs[rng.below(4)]);
  return w;
}

namespace {

// Rational point on the unit circle from a Pythagorean triple.
std::pair<GaussianRational, GaussianRational> random_rotation_angle(SplitMix64& rng) {
  static const int triples[][3] = {{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {7, 24, 25}};
  const auto& t = triples[rng.below(4)];
  const long sign = rng.coin() ? 1 : -1;
  const bool swap = rng.coin();
  return {GaussianRational::fraction(swap ? t[1] : t[0], t[2]),
          GaussianRational::fraction(sign * (swap ? t[0] : t[1]), t[2])};
}

HModuleMatrix random_unitary(SplitMix64& rng, const GroupPtr& group, int m, int n) {
  HModuleMatrix w = random_monomial_unitary(rng, group, m, n);
  const int size = w.size();
  if (size < 2) return w;
  const int rotations = rng.between(0, size);
  for (int k = 0; k < rotations; ++k) {
    const int i = static_cast<int>(rng.below(size));
    int j = static_cast<int>(rng.below(size - 1));
    if (j >= i) ++j;
    auto [c, s] = random_rotation_angle(rng);
    const Element h = static_cast<Element>(rng.below(group->order()));
    // [[c, -s h^-1], [s h, c]] is unitary over CH.
    HModuleMatrix r = HModuleMatrix::identity(group, m, n);
    r.at(i, i) = GroupAlgebraElement::basis(group, 0, c);
    r.at(j, j) = GroupAlgebraElement::basis(group, 0, c);
    r.at(i, j) = GroupAlgebraElement::basis(group, group->inv(h), -s);
    r.at(j, i) = GroupAlgebraElement::basis(group, h, s);
    w = r * w;
  }
  return w;
}

GroupAlgebraElement random_diagonal_projection(SplitMix64& rng, const GroupPtr& group,
                                               const std::vector<Subgroup>& subgroups) {
  switch (rng.below(4)) {
    case 0:
      return GroupAlgebraElement::zero(group);
    case 1:
      return GroupAlgebraElement::one(group);
    default: {
      const auto& k = subgroups[rng.below(subgroups.size())];
      const auto h = GroupAlgebraElement::basis(group, static_cast<Element>(rng.below(group->order())));
      return h * GroupAlgebraElement::averaging(k) * h.star();
    }
  }
}

HModuleMatrix random_diagonal(SplitMix64& rng, const GroupPtr& group, const std::vector<Subgroup>& subgroups,
                              int m, int n) {
  HModuleMatrix d(group, m, n);
  for (int i = 0; i < d.size(); ++i) d.at(i, i) = random_diagonal_projection(rng, group, subgroups);
  return d;
}

}  // namespace

ProjectionPair generate_projection_pair(std::uint64_t seed, const GroupPtr& group, int m, int n) {
  if (m < 1 || n < 1) throw ValidationError("projection pair needs m, n >= 1");
  const long dim = static_cast<long>(group->order()) * m * n;
  if (dim > kMaxScalarDimension)
    throw BudgetExceeded("projection pair dimension above " + std::to_string(kMaxScalarDimension),
                         static_cast<std::size_t>(dim));
  const auto subgroups = all_subgroups(group);
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const HModuleMatrix d = random_diagonal(rng, group, subgroups, m, n);
    const HModuleMatrix w = random_unitary(rng, group, m, n);
    ProjectionPair out{w * d * w.adjoint(), {}};
    switch (rng.below(3)) {
      case 0: {  // independent
        const HModuleMatrix w2 = random_unitary(rng, group, m, n);
        out.q = w2 * random_diagonal(rng, group, subgroups, m, n) * w2.adjoint();
        break;
      }
      case 1: {  // same frame, a few diagonal entries redrawn
        HModuleMatrix d2 = d;
        const int changes = rng.between(1, d2.size());
        for (int k = 0; k < changes; ++k) {
          const int i = static_cast<int>(rng.below(d2.size()));
          d2.at(i, i) = random_diagonal_projection(rng, group, subgroups);
        }
        out.q = w * d2 * w.adjoint();
        break;
      }
      default: {  // unitarily equivalent
        const HModuleMatrix v = random_unitary(rng, group, m, n);
        out.q = v * out.p * v.adjoint();
        break;
      }
    }
    if (out.p == out.q) continue;
    validate_projection(out.p, "P");
    validate_projection(out.q, "Q");
    return out;
  }
  throw ValidationError("could not draw two distinct projections");
}

KasparovReport kasparov_compactness_check(const HModuleMatrix& p, const HModuleMatrix& q) {
  validate_projection(p, "P");
  validate_projection(q, "Q");
  const HModuleMatrix pq = p * q, qp = q * p;
  const HModuleMatrix zero(p.group(), p.m(), p.n());
  const HModuleMatrix f = HModuleMatrix::blocks(zero, pq, qp, zero);
  const HModuleMatrix f_star = f.adjoint();
  const HModuleMatrix diag = HModuleMatrix::blocks(pq * p, zero, zero, qp * q);
  KasparovReport r;
  r.self_adjoint = f_star == f;
  r.square_is_diagonal = f_star * f == diag && f * f == diag && f * f_star == diag;
  r.rank_p_defect = rank_of(p - pq * p);
  r.rank_q_defect = rank_of(q - qp * q);
  r.rank_difference = rank_of(p - q);
  return r;
}

nlohmann::json KasparovReport::to_json() const {
  return {{"self_adjoint", self_adjoint},   {"square_is_diagonal", square_is_diagonal},
          {"rank_p_defect", rank_p_defect}, {"rank_q_defect", rank_q_defect},
          {"rank_difference", rank_difference}, {"passed", passed()}};
}

namespace {

Eigen::MatrixXcd to_eigen(const HModuleMatrix& x) {
  const ScalarMatrix s = regular_representation(x);
  Eigen::MatrixXcd out(s.rows, s.cols);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j) out(i, j) = s.at(i, j).to_complex();
  return out;
}

// tr|X| with |X| = sqrt(X* X) from a Hermitian eigendecomposition.
double trace_abs(const Eigen::MatrixXcd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(x.adjoint() * x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  double sum = 0;
  for (double lambda : solver.eigenvalues()) sum += std::sqrt(std::max(lambda, 0.0));
  return sum;
}

double operator_norm(const Eigen::MatrixXcd& x) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x);
  return svd.singularValues()(0);
}

}  // namespace

NormReport norm_inequalities_check(const HModuleMatrix& a, const HModuleMatrix& b, const HModuleMatrix& c,
                                   double relative_tolerance) {
  const double order = a.group()->order();
  const Eigen::MatrixXcd ea = to_eigen(a), eb = to_eigen(b), ec = to_eigen(c);
  NormReport r;
  r.relative_tolerance = relative_tolerance;
  r.trace_sum = std::abs((ea + eb).trace()) / order;
  const double abs_a = trace_abs(ea) / order;
  r.trace_bound = abs_a + trace_abs(eb) / order;
  r.product_trace = trace_abs(ec * ea * eb) / order;
  r.product_bound = operator_norm(ec) * operator_norm(eb) * abs_a;
  if (!std::isfinite(r.trace_bound) || !std::isfinite(r.product_bound))
    throw NumericalFailure("non-finite norm");
  r.triangle_ok = r.trace_sum <= r.trace_bound + relative_tolerance * std::max(1.0, r.trace_bound);
  r.product_ok = r.product_trace <= r.product_bound + relative_tolerance * std::max(1.0, r.product_bound);
  return r;
}

nlohmann::json NormReport::to_json() const {
  return {{"trace_sum", trace_sum},         {"trace_bound", trace_bound},
          {"product_trace", product_trace}, {"product_bound", product_bound},
          {"relative_tolerance", relative_tolerance}, {"passed", passed()}};
}

HModuleMatrix random_module_matrix(SplitMix64& rng, const GroupPtr& group, int m, int n, double density) {
  HModuleMatrix x(group, m, n);
  const auto threshold = static_cast<std::uint64_t>(density * 1024);
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j) {
      if (rng.below(1024) >= threshold) continue;
      const int terms = rng.between(1, 3);
      for (int k = 0; k < terms; ++k)
        x.at(i, j).add(static_cast<Element>(rng.below(group->order())), random_scalar(rng));
    }
  return x;
}

}  // namespace treetrace
