#include "doctest.h"
#include "fixtures.hpp"
#include "treetrace/errors.hpp"
#include "treetrace/index_verifier.hpp"

using namespace treetrace;
using namespace treetrace::testing;

namespace {

// Plain Gauss-Jordan over Q(i), independent of the fraction-free code.
int naive_rank(ScalarMatrix x) {
  int rank = 0;
  for (int c = 0; c < x.cols && rank < x.rows; ++c) {
    int p = rank;
    while (p < x.rows && x.at(p, c).is_zero()) ++p;
    if (p == x.rows) continue;
    for (int j = 0; j < x.cols; ++j) std::swap(x.at(p, j), x.at(rank, j));
    const GaussianRational pivot = x.at(rank, c);
    for (int i = 0; i < x.rows; ++i) {
      if (i == rank || x.at(i, c).is_zero()) continue;
      const GaussianRational f = x.at(i, c) / pivot;
      for (int j = 0; j < x.cols; ++j) x.at(i, j) -= f * x.at(rank, j);
    }
    ++rank;
  }
  return rank;
}

ScalarMatrix random_scalar_matrix(SplitMix64& rng, int rows, int cols) {
  ScalarMatrix x(nullptr, rows, cols);
  for (auto& z : x.data)
    if (rng.coin()) z = random_scalar(rng);
  return x;
}

GroupAlgebraElement random_algebra_element(SplitMix64& rng, const GroupPtr& h) {
  GroupAlgebraElement x(h);
  for (int k = rng.between(0, 4); k > 0; --k) x.add(static_cast<Element>(rng.below(h->order())), random_scalar(rng));
  return x;
}

HModuleMatrix diagonal(const GroupPtr& h, std::vector<GroupAlgebraElement> entries) {
  HModuleMatrix x(h, static_cast<int>(entries.size()));
  for (int i = 0; i < x.size(); ++i) x.at(i, i) = entries[i];
  return x;
}

}  // namespace

TEST_CASE("exact rank agrees with naive elimination") {
  SplitMix64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = rng.between(1, 9), cols = rng.between(1, 9), inner = rng.between(1, 5);
    ScalarMatrix x = random_scalar_matrix(rng, rows, inner) * random_scalar_matrix(rng, inner, cols);
    const int r = exact_rank(x);
    CHECK(r == naive_rank(x));
    CHECK(r <= inner);
  }
  CHECK(exact_rank(ScalarMatrix(nullptr, 3, 4)) == 0);
  CHECK(exact_rank(ScalarMatrix(nullptr, 0, 0)) == 0);
}

TEST_CASE("module matrix product matches entrywise convolution") {
  SplitMix64 rng(3);
  for (const auto& h : {cyclic(2), cyclic(3), s3()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int m = rng.between(1, 3), n = rng.between(1, 2);
      HModuleMatrix a(h, m, n), b(h, m, n);
      for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
          a.at(i, j) = random_algebra_element(rng, h);
          b.at(i, j) = random_algebra_element(rng, h);
        }
      const HModuleMatrix c = a * b;
      for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
          GroupAlgebraElement want = GroupAlgebraElement::zero(h);
          for (int l = 0; l < a.size(); ++l) want += a.at(i, l) * b.at(l, j);
          CHECK(c.at(i, j) == want);
        }
    }
  }
}

TEST_CASE("regular representation") {
  auto c2 = cyclic(2);
  CHECK(regular_representation(GroupAlgebraElement::one(c2)).data ==
        std::vector<GaussianRational>{1, 0, 0, 1});
  auto e = GroupAlgebraElement::averaging(Subgroup{c2, {0, 1}});
  auto half = GaussianRational::fraction(1, 2);
  CHECK(regular_representation(e).data == std::vector<GaussianRational>{half, half, half, half});

  auto h = s3();
  SplitMix64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_algebra_element(rng, h), y = random_algebra_element(rng, h);
    CHECK(regular_representation(x * y) == regular_representation(x) * regular_representation(y));
    CHECK(regular_representation(x.star()) == regular_representation(x).adjoint());
    auto a = random_module_matrix(rng, h, 2), b = random_module_matrix(rng, h, 2);
    CHECK(regular_representation(a * b) == regular_representation(a) * regular_representation(b));
    CHECK(regular_representation(a.adjoint()) == regular_representation(a).adjoint());
    CHECK(is_h_equivariant(regular_representation(a)));
  }
}

TEST_CASE("von Neumann dimension") {
  auto c2 = cyclic(2);
  auto e = GroupAlgebraElement::averaging(Subgroup{c2, {0, 1}});
  CHECK(vn_dimension(regular_representation(HModuleMatrix::identity(c2, 3)), Subspace::Image) == 3);
  CHECK(vn_dimension(regular_representation(e), Subspace::Kernel) == mpq_class(1, 2));
  CHECK(vn_dimension(regular_representation(HModuleMatrix(c2, 4)), Subspace::Kernel) == 4);
  ScalarMatrix skew(c2, 2, 2);
  skew.at(0, 0) = 1;
  CHECK_THROWS_AS(vn_dimension(skew, Subspace::Image), NotHEquivariant);

  auto h = s3();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto pair = generate_projection_pair(seed, h, 3, 2);
    mpq_class dim = vn_dimension(regular_representation(pair.p), Subspace::Image);
    CHECK(dim >= 0);
    CHECK(dim <= 6);
    CHECK(mpq_class(dim * 6).get_den() == 1);
    CHECK(GaussianRational(dim) == h_trace(pair.p));
  }
}

TEST_CASE("h_trace") {
  auto h = s3();
  CHECK(h_trace(HModuleMatrix::identity(h, 4)) == GaussianRational(4));
  auto c2 = cyclic(2);
  CHECK(h_trace(diagonal(c2, {GroupAlgebraElement::averaging(Subgroup{c2, {0, 1}})})) ==
        GaussianRational::fraction(1, 2));
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_module_matrix(rng, h, 2, 2), y = random_module_matrix(rng, h, 2, 2);
    CHECK(h_trace(x * y) == h_trace(y * x));
  }
}

TEST_CASE("h_index examples") {
  auto h = s3();
  auto pair = generate_projection_pair(4, h, 2, 1);
  auto same = h_index(pair.p, pair.p);
  CHECK(same.trace_diff.is_zero());
  CHECK(same.index == 0);
  CHECK(same.equal);

  auto p = diagonal(h, {GroupAlgebraElement::one(h)});
  auto q = diagonal(h, {GroupAlgebraElement::zero(h)});
  auto r = h_index(p, q);
  CHECK(r.trace_diff == GaussianRational(1));
  CHECK(r.dim_ker == 1);
  CHECK(r.dim_coker == 0);
  CHECK(r.index == 1);
  CHECK(r.equal);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto base = generate_projection_pair(100 + trial, h, 2, 2).p;
    auto u = random_monomial_unitary(rng, h, 2, 2);
    auto conj = h_index(base, u * base * u.adjoint());
    CHECK(conj.trace_diff.is_zero());
    CHECK(conj.index == 0);
    CHECK(conj.equal);
  }

  auto not_idempotent = diagonal(h, {GroupAlgebraElement::basis(h, 0, 2)});
  CHECK_THROWS_WITH_AS(h_index(not_idempotent, q), "P^2 != P at entry (0, 0)", NotAProjection);
  auto not_selfadjoint = diagonal(h, {GroupAlgebraElement::basis(h, 1)});
  CHECK_THROWS_AS(h_index(p, not_selfadjoint), NotAProjection);
}

TEST_CASE("generated pairs satisfy trace = index") {
  for (auto group : {cyclic(2), cyclic(3), s3()}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const int m = 1 + static_cast<int>(seed % 4), n = 1 + static_cast<int>(seed / 4 % 2);
      auto pair = generate_projection_pair(seed, group, m, n);
      CHECK_FALSE(pair.p == pair.q);
      auto again = generate_projection_pair(seed, group, m, n);
      CHECK(again.p == pair.p);
      CHECK(again.q == pair.q);
      auto report = h_index(pair.p, pair.q);
      CHECK(report.equal);
      CHECK(report.trace_t0 == report.trace_t1);
      CHECK(report == h_index(pair.p.pad(2 * m), pair.q.pad(2 * m)));
      CHECK(kasparov_compactness_check(pair.p, pair.q).passed());
    }
  }
  CHECK_THROWS_AS(generate_projection_pair(0, s3(), 50, 2), BudgetExceeded);
}

TEST_CASE("additivity over block sums") {
  auto h = s3();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto a = generate_projection_pair(seed, h, 2), b = generate_projection_pair(seed + 50, h, 1);
    auto ra = h_index(a.p, a.q), rb = h_index(b.p, b.q);
    auto sum = h_index(HModuleMatrix::direct_sum(a.p, b.p), HModuleMatrix::direct_sum(a.q, b.q));
    CHECK(sum.index == ra.index + rb.index);
    CHECK(sum.trace_diff == ra.trace_diff + rb.trace_diff);
  }
}

TEST_CASE("kasparov compactness examples") {
  auto h = s3();
  auto pair = generate_projection_pair(7, h, 2);
  auto same = kasparov_compactness_check(pair.p, pair.p);
  CHECK(same.passed());
  CHECK(same.rank_p_defect == 0);
  CHECK(same.rank_q_defect == 0);

  auto one = GroupAlgebraElement::one(h), zero = GroupAlgebraElement::zero(h);
  auto p = diagonal(h, {one, zero, one}), q = diagonal(h, {zero, one, zero});
  auto orth = kasparov_compactness_check(p, q);
  CHECK(orth.passed());
  CHECK(orth.rank_p_defect == 12);
  CHECK(orth.rank_q_defect == 6);
  CHECK(orth.rank_difference == 18);
}

TEST_CASE("norm inequalities") {
  auto h = s3();
  HModuleMatrix zero(h, 2);
  auto r0 = norm_inequalities_check(zero, zero, zero);
  CHECK(r0.passed());
  CHECK(r0.trace_bound == 0);

  SplitMix64 rng(9);
  auto a = random_module_matrix(rng, h, 2);
  auto id = HModuleMatrix::identity(h, 2);
  auto r1 = norm_inequalities_check(a, id, id);
  CHECK(r1.passed());
  CHECK(r1.product_trace == doctest::Approx(r1.product_bound).epsilon(1e-9));

  for (int trial = 0; trial < 30; ++trial) {
    const int m = rng.between(1, 2), n = rng.between(1, 2);
    auto r = norm_inequalities_check(random_module_matrix(rng, h, m, n), random_module_matrix(rng, h, m, n),
                                     random_module_matrix(rng, h, m, n));
    CHECK(r.passed());
  }
}
