#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "treetrace/errors.hpp"
#include "treetrace/finite_group.hpp"

using namespace treetrace;
using namespace treetrace::testing;

namespace {

// Independent Cayley table of S3: enumerate permutations with next_permutation
// and compose them directly.
std::vector<std::vector<int>> s3_table_by_enumeration(std::vector<Permutation>& perms) {
  Permutation p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      Permutation c(3);
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      table[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return table;
}

void check_axioms_exhaustively(const FiniteGroup& g) {
  for (Element a = 0; a < g.order(); ++a) {
    CHECK(g.mul(0, a) == a);
    CHECK(g.mul(a, 0) == a);
    CHECK(g.mul(a, g.inv(a)) == 0);
    for (Element b = 0; b < g.order(); ++b)
      for (Element c = 0; c < g.order(); ++c)
        REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST_CASE("check_group_axioms accepts small groups") {
  auto trivial = check_group_axioms({{0}});
  CHECK(trivial.order() == 1);

  auto c2 = check_group_axioms({{0, 1}, {1, 0}});
  CHECK(c2.order() == 2);
  CHECK(c2.inv(1) == 1);

  std::vector<Permutation> perms;
  auto s3 = check_group_axioms(s3_table_by_enumeration(perms));
  CHECK(s3.order() == 6);
  int involutions = 0;
  for (Element a = 0; a < 6; ++a) involutions += s3.element_order(a) == 2;
  CHECK(involutions == 3);
  check_axioms_exhaustively(s3);
}

TEST_CASE("check_group_axioms relabels the identity to 0") {
  // C2 with identity at index 1.
  auto g = check_group_axioms({{1, 0}, {0, 1}});
  CHECK(g.mul(0, 1) == 1);
  CHECK(g.label(0) == "1");
  CHECK(g.label(1) == "0");
}

TEST_CASE("check_group_axioms names witnesses") {
  CHECK_THROWS_WITH_AS(check_group_axioms({{0, 1}, {1, 1}}), doctest::Contains("NoInverse(1)"),
                       GroupAxiomError);
  CHECK_THROWS_WITH_AS(check_group_axioms({{1, 0}, {1, 0}}), doctest::Contains("NoIdentity"),
                       GroupAxiomError);
  // Identity 0, every element self-inverse, but 1*2 = 1 breaks associativity.
  std::vector<std::vector<int>> bad{{0, 1, 2}, {1, 0, 1}, {2, 2, 0}};
  CHECK_THROWS_WITH_AS(check_group_axioms(bad), doctest::Contains("NotAssociative"),
                       GroupAxiomError);
  CHECK_THROWS_AS(check_group_axioms({{0, 3}, {1, 0}}), GroupAxiomError);
}

TEST_CASE("permutation groups close and keep identity at 0") {
  auto g = FiniteGroup::from_permutations({{1, 0, 2, 3}, {1, 2, 3, 0}});
  CHECK(g.order() == 24);
  CHECK(g.permutation(0) == Permutation{0, 1, 2, 3});
  check_axioms_exhaustively(g);
  CHECK(g.find_permutation({1, 0, 2, 3}).has_value());
  CHECK(g.find_label("[1,0,2,3]") == g.find_permutation({1, 0, 2, 3}));
  CHECK_THROWS_AS(FiniteGroup::from_permutations({{0, 0, 1}}), GroupAxiomError);
}

TEST_CASE("subgroup_generated") {
  auto g = s3();
  CHECK(subgroup_generated(g, std::vector<Element>{}).members == std::vector<Element>{0});
  auto c2 = cyclic(2);
  CHECK(subgroup_generated(c2, std::vector<Element>{1}).order() == 2);
  Element s = first_involution(*g);
  auto sub = subgroup_generated(g, std::vector<Element>{s});
  CHECK(sub.order() == 2);
  CHECK(sub.contains(0));
  CHECK(sub.contains(s));
  CHECK_THROWS_AS(subgroup_generated(g, std::vector<Element>{7}), IndexOutOfRange);
}

TEST_CASE("all_subgroups of S3") {
  auto subs = all_subgroups(s3());
  // trivial, three of order 2, one of order 3, whole group
  REQUIRE(subs.size() == 6);
  std::multiset<int> orders;
  for (const auto& s : subs) orders.insert(s.order());
  CHECK(orders == std::multiset<int>{1, 2, 2, 2, 3, 6});
}

TEST_CASE("build_transversal") {
  auto g = s3();
  auto t = build_transversal(Subgroup{g, {0}}, CosetSide::Right);
  CHECK(t.reps.size() == 6);
  std::vector<Element> all{0, 1, 2, 3, 4, 5};
  auto whole = build_transversal(Subgroup{g, all}, CosetSide::Left);
  CHECK(whole.reps == std::vector<Element>{0});

  Element s = first_involution(*g);
  auto sub = subgroup_generated(g, std::vector<Element>{s});
  for (CosetSide side : {CosetSide::Left, CosetSide::Right}) {
    auto tr = build_transversal(sub, side);
    REQUIRE(tr.reps.size() == 3);
    CHECK(tr.reps[0] == 0);
    // Coset enumeration oracle: reps lie in pairwise distinct cosets.
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        Element q = side == CosetSide::Right ? g->mul(tr.reps[i], g->inv(tr.reps[j]))
                                             : g->mul(g->inv(tr.reps[i]), tr.reps[j]);
        CHECK_FALSE(sub.contains(q));
      }
    for (Element a = 0; a < 6; ++a) {
      auto [u, rep] = tr.decompose(a);
      CHECK(sub.contains(u));
      CHECK((side == CosetSide::Right ? g->mul(u, rep) : g->mul(rep, u)) == a);
      CHECK(*std::min_element(sub.members.begin(), sub.members.end()) == 0);
    }
    // Determinism.
    CHECK(build_transversal(sub, side).reps == tr.reps);
  }
}

TEST_CASE("Lagrange holds for every subgroup and transversal") {
  for (auto group : {s3(), cyclic(6), make_group(FiniteGroup::symmetric(4))}) {
    for (const auto& sub : all_subgroups(group))
      for (CosetSide side : {CosetSide::Left, CosetSide::Right})
        CHECK(build_transversal(sub, side).reps.size() * sub.members.size() ==
              static_cast<std::size_t>(group->order()));
  }
}

TEST_CASE("is_injective_on") {
  auto g = s3();
  std::vector<Element> all{0, 1, 2, 3, 4, 5};
  CHECK(is_injective_on(identity_hom(g), Subgroup{g, all}));

  auto c2 = cyclic(2);
  auto trivial = make_group(FiniteGroup::cyclic(1));
  auto collapse = make_hom(c2, trivial, {0, 0});
  auto r = is_injective_on(collapse, Subgroup{c2, {0, 1}});
  CHECK_FALSE(r.injective);
  REQUIRE(r.witness);
  CHECK(*r.witness == std::pair<Element, Element>{0, 1});

  CHECK_THROWS_AS(is_injective_on(collapse, Subgroup{g, {0}}), SubgroupNotInSource);
  CHECK_THROWS_AS(make_hom(c2, c2, {0, 0, 1}), ValidationError);
}

TEST_CASE("injective restriction is a bijection onto its image") {
  auto g = s3();
  auto c2 = cyclic(2);
  // Sign homomorphism S3 -> C2.
  std::vector<Element> sign(6);
  for (Element a = 0; a < 6; ++a) sign[a] = g->element_order(a) == 2 ? 1 : 0;
  auto hom = make_hom(g, c2, sign);
  for (const auto& sub : all_subgroups(g)) {
    auto r = is_injective_on(hom, sub);
    std::set<Element> image;
    for (Element a : sub.members) image.insert(hom(a));
    CHECK(r.injective == (image.size() == sub.members.size()));
  }
}

TEST_CASE("subgroup_as_group") {
  auto h = s3();
  std::vector<Element> gens{first_of_order(*h, 3)};
  Subgroup c3 = subgroup_generated(h, gens);
  GroupPtr g = subgroup_as_group(c3);
  REQUIRE(g->order() == 3);
  for (Element a = 0; a < 3; ++a)
    for (Element b = 0; b < 3; ++b) CHECK(c3.members[g->mul(a, b)] == h->mul(c3.members[a], c3.members[b]));
  CHECK(g->label(1) == h->label(c3.members[1]));
}

TEST_CASE("hom_from_generators") {
  auto h = s3();
  const Element s = first_involution(*h), c = first_of_order(*h, 3);

  // Conjugation by s, given on the two generators.
  std::vector<std::pair<Element, Element>> images{{s, h->conjugate(s, s)}, {c, h->conjugate(s, c)}};
  GroupHom conj = hom_from_generators(h, h, images);
  for (Element x = 0; x < h->order(); ++x) CHECK(conj(x) == h->conjugate(s, x));

  // Sign character onto C2.
  auto c2 = cyclic(2);
  std::vector<std::pair<Element, Element>> sign{{s, 1}, {c, 0}};
  GroupHom sgn = hom_from_generators(h, c2, sign);
  for (Element x = 0; x < h->order(); ++x) CHECK(sgn(x) == (h->element_order(x) == 2 ? 1 : 0));

  std::vector<std::pair<Element, Element>> bad{{s, 0}, {c, 1}};
  CHECK_THROWS_WITH_AS(hom_from_generators(h, c2, bad), doctest::Contains("conflict"), ValidationError);
  std::vector<std::pair<Element, Element>> partial{{c, c}};
  CHECK_THROWS_WITH_AS(hom_from_generators(h, h, partial), doctest::Contains("do not generate"), ValidationError);
  std::vector<std::pair<Element, Element>> none;
  CHECK(hom_from_generators(cyclic(1), c2, none).images == std::vector<Element>{0});
}
