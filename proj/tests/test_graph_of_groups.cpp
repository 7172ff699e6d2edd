#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "treetrace/errors.hpp"
#include "treetrace/graph_of_groups.hpp"
#include "treetrace/sampling.hpp"
#include "word_oracle.hpp"

using namespace treetrace;
using namespace treetrace::testing;

namespace {

std::vector<std::shared_ptr<const GraphOfGroups>> all_specs() {
  return {s3_double(), s3_hnn(), infinite_dihedral()};
}

}  // namespace

TEST_CASE("normalize basics") {
  auto amalgam = s3_double();
  auto hnn = s3_hnn();
  CHECK(amalgam->normalize({}).is_identity());
  CHECK(hnn->normalize({}).length() == 0);

  // t u t^-1 = phi(u) = g u g^-1
  const auto& hs = hnn->hnn_spec();
  for (Element u : hs.U.members) {
    std::vector<RawLetter> w{RawLetter::t(1), RawLetter::h(u), RawLetter::t(-1)};
    NormalForm x = hnn->normalize(w);
    CHECK(x.length() == 0);
    CHECK(x.head == hs.H->conjugate(hs.conjugator, u));
  }

  // [a, a^-1, b] with b outside U reduces to the single letter b = u * rep.
  const auto& as = amalgam->amalgam_spec();
  const auto& tb = amalgam->right_transversal(1);
  for (Element a = 0; a < as.A->order(); ++a)
    for (Element b = 0; b < as.B->order(); ++b) {
      if (tb.rep_of(b) == 0) continue;
      std::vector<RawLetter> w{RawLetter::a(a), RawLetter::a(as.A->inv(a)), RawLetter::b(b)};
      NormalForm x = amalgam->normalize(w);
      REQUIRE(x.length() == 1);
      CHECK(x.letters[0].tag == 1);
      CHECK(x.letters[0].rep == tb.rep_of(b));
      auto [u, rep] = tb.decompose(b);
      CHECK(as.embed_B(x.head) == u);
    }

  CHECK_THROWS_AS(amalgam->normalize(std::vector<RawLetter>{RawLetter::t(1)}), InvalidLetter);
  CHECK_THROWS_AS(hnn->normalize(std::vector<RawLetter>{RawLetter::a(1)}), InvalidLetter);
  CHECK_THROWS_AS(hnn->normalize(std::vector<RawLetter>{RawLetter::h(6)}), InvalidLetter);
}

TEST_CASE("normalize agrees with the reduction oracle") {
  for (const auto& spec : all_specs()) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      auto w = random_raw_word(*spec, rng, rng.between(0, 8));
      NormalForm x = spec->normalize(w);
      // Same element: w * x^-1 is trivial.
      REQUIRE(word_is_identity(*spec, concat(w, inverse_word(*spec, spec->raw_letters(x)))));
      // Idempotence.
      REQUIRE(spec->normalize(spec->raw_letters(x)) == x);
      // Identity words normalize to the empty form (Britton / reduced forms).
      REQUIRE(word_is_identity(*spec, w) == x.is_identity());
    }
  }
}

TEST_CASE("distinct normal forms are distinct elements") {
  for (const auto& spec : all_specs()) {
    auto ball = spec->enumerate_ball(2);
    for (std::size_t i = 0; i < ball.size(); ++i)
      for (std::size_t j = i + 1; j < ball.size(); ++j) {
        auto w = concat(spec->raw_letters(ball[i]),
                        inverse_word(*spec, spec->raw_letters(ball[j])));
        REQUIRE_FALSE(word_is_identity(*spec, w));
      }
  }
}

TEST_CASE("multiply and invert") {
  for (const auto& spec : all_specs()) {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      auto wx = random_raw_word(*spec, rng, rng.between(0, 3));
      auto wy = random_raw_word(*spec, rng, rng.between(0, 3));
      NormalForm x = spec->normalize(wx);
      NormalForm y = spec->normalize(wy);
      CHECK(spec->multiply(x, spec->identity()) == x);
      CHECK(spec->multiply(spec->identity(), x) == x);
      CHECK(spec->multiply(x, spec->invert(x)).is_identity());
      CHECK(spec->multiply(x, y) == spec->normalize(concat(wx, wy)));
      CHECK(spec->invert(x) == spec->normalize(inverse_word(*spec, wx)));
    }
    CHECK(spec->invert(spec->identity()).is_identity());
  }
  auto amalgam = s3_double();
  const auto& a = *amalgam->amalgam_spec().A;
  for (Element x = 0; x < a.order(); ++x)
    CHECK(amalgam->invert(amalgam->letter(RawLetter::a(x))) ==
          amalgam->letter(RawLetter::a(a.inv(x))));
  CHECK_THROWS_AS(amalgam->multiply(amalgam->identity(), s3_double()->identity()), SpecMismatch);
}

TEST_CASE("multiply is associative on the length-2 ball") {
  for (const auto& spec : all_specs()) {
    auto ball = spec->enumerate_ball(2);
    for (const auto& x : ball)
      for (const auto& y : ball) {
        NormalForm xy = spec->multiply(x, y);
        for (const auto& z : ball)
          REQUIRE(spec->multiply(xy, z) == spec->multiply(x, spec->multiply(y, z)));
      }
  }
}

TEST_CASE("alpha") {
  auto hnn = s3_hnn();
  const auto& hs = hnn->hnn_spec();
  CHECK(hnn->alpha(hnn->identity()) == 0);
  CHECK(hnn->alpha(hnn->letter(RawLetter::t(1))) == hs.conjugator);
  for (Element h = 0; h < hs.H->order(); ++h) CHECK(hnn->alpha(hnn->letter(RawLetter::h(h))) == h);

  // Fold map: a letter of the second copy maps to the same element of H.
  auto amalgam = s3_double();
  for (Element b = 0; b < 6; ++b) CHECK(amalgam->alpha(amalgam->letter(RawLetter::b(b))) == b);

  for (const auto& spec : all_specs()) {
    SplitMix64 rng(3);
    const FiniteGroup& h = *spec->target();
    for (int trial = 0; trial < 1000; ++trial) {
      NormalForm x = random_element(*spec, rng, 4);
      NormalForm y = random_element(*spec, rng, 4);
      REQUIRE(spec->alpha(spec->multiply(x, y)) == h.mul(spec->alpha(x), spec->alpha(y)));
    }
  }
}

TEST_CASE("enumerate_ball") {
  auto amalgam = s3_double();
  auto hnn = s3_hnn();
  CHECK(amalgam->enumerate_ball(0).size() == 2);
  CHECK(hnn->enumerate_ball(0).size() == 6);

  // Infinite dihedral group: 1 + 2 + 2 + 2 elements of length <= 3.
  auto d = infinite_dihedral();
  CHECK(d->enumerate_ball(3).size() == 7);

  for (const auto& spec : all_specs()) {
    std::size_t previous = 0;
    for (int len = 0; len <= 4; ++len) {
      auto ball = spec->enumerate_ball(len);
      CHECK(ball.size() >= previous);
      CHECK(ball.size() == spec->ball_size(len));
      CHECK(std::is_sorted(ball.begin(), ball.end()));
      CHECK(std::set<NormalForm>(ball.begin(), ball.end()).size() == ball.size());
      for (const auto& x : ball) {
        CHECK(x.length() <= static_cast<std::size_t>(len));
        CHECK(spec->normalize(spec->raw_letters(x)) == x);
      }
      previous = ball.size();
    }
    CHECK_THROWS_AS(spec->enumerate_ball(30, 50), BudgetExceeded);
  }
}

TEST_CASE("enumerate_ball matches brute-force word enumeration") {
  // Oracle: normalize every raw word up to a length and keep forms of
  // length <= 2. Raw letters may cancel, so raw length 5 reaches every form
  // of length 2 in these specs.
  for (const auto& spec : {s3_double(), s3_hnn()}) {
    std::vector<RawLetter> alphabet;
    if (spec->kind() == SpecKind::Amalgam) {
      for (Element a = 1; a < 6; ++a) alphabet.push_back(RawLetter::a(a));
      for (Element b = 1; b < 6; ++b) alphabet.push_back(RawLetter::b(b));
    } else {
      for (Element h = 1; h < 6; ++h) alphabet.push_back(RawLetter::h(h));
      alphabet.push_back(RawLetter::t(1));
      alphabet.push_back(RawLetter::t(-1));
    }
    std::set<NormalForm> seen{spec->identity()};
    std::vector<NormalForm> frontier{spec->identity()};
    for (int step = 0; step < 5; ++step) {
      std::vector<NormalForm> next;
      for (const auto& x : frontier)
        for (const auto& l : alphabet) {
          NormalForm y = spec->multiply(x, spec->letter(l));
          if (y.length() <= 3 && seen.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    std::set<NormalForm> short_ones;
    for (const auto& x : seen)
      if (x.length() <= 2) short_ones.insert(x);
    auto ball = spec->enumerate_ball(2);
    CHECK(std::set<NormalForm>(ball.begin(), ball.end()) == short_ones);
  }
}

TEST_CASE("spec validation") {
  auto h = s3();
  std::vector<Element> gens{first_of_order(*h, 3)};
  auto c3 = subgroup_generated(h, gens);
  HNNSpec bad;
  bad.H = h;
  bad.U = c3;
  bad.conjugator = first_involution(*h);
  bad.phi.assign(6, -1);
  for (Element u : c3.members) bad.phi[u] = u;  // identity is not conjugation by a transposition
  CHECK_THROWS_AS(GraphOfGroups::hnn(bad), ValidationError);

  // Amalgam with alpha_B collapsing B.
  auto c2 = cyclic(2);
  auto trivial = make_group(FiniteGroup::cyclic(1));
  AmalgamSpec s;
  s.A = c2;
  s.B = c2;
  s.U = trivial;
  s.H = c2;
  s.embed_A = make_hom(trivial, c2, {0});
  s.embed_B = make_hom(trivial, c2, {0});
  s.alpha_A = identity_hom(c2);
  s.alpha_B = make_hom(c2, c2, {0, 0});
  CHECK_THROWS_WITH_AS(GraphOfGroups::amalgam(s), doctest::Contains("vertex group B"),
                       ValidationError);
}
