#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "treetrace/errors.hpp"
#include "treetrace/group_algebra.hpp"
#include "treetrace/group_ring.hpp"
#include "treetrace/sampling.hpp"

using namespace treetrace;
using namespace treetrace::testing;

TEST_CASE("gaussian rational arithmetic") {
  GaussianRational a(mpq_class(1, 2), 1);
  GaussianRational b = a.conj();
  CHECK(a * b == GaussianRational(mpq_class(5, 4)));
  CHECK((a * b).is_real());
  CHECK(a / a == GaussianRational(1));
  CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
  CHECK(GaussianRational(mpq_class(2, 4)) == GaussianRational::fraction(1, 2));
  CHECK((a - a).is_zero());
  CHECK_THROWS_AS(a / GaussianRational(), std::domain_error);
  CHECK_THROWS_AS(GaussianRational::fraction(1, 0), std::domain_error);
}

TEST_CASE("gaussian rational text form") {
  CHECK(GaussianRational::fraction(3, 6).to_string() == "1/2");
  CHECK(GaussianRational(-4).to_string() == "-4");
  CHECK(GaussianRational().to_string() == "0");
  CHECK(GaussianRational(mpq_class(1, 2), mpq_class(3)).to_string() == "1/2+3*i");
  CHECK(GaussianRational(0, mpq_class(-2, 3)).to_string() == "-2/3*i");
  CHECK(GaussianRational(1, -1).to_string() == "1-i");
  CHECK(GaussianRational::i().to_string() == "i");

  SplitMix64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    GaussianRational z = random_scalar(rng) / random_nonzero_scalar(rng);
    CHECK(GaussianRational::parse(z.to_string()) == z);
  }
  CHECK(GaussianRational::parse("+3/6") == GaussianRational::fraction(1, 2));
  for (const char* bad : {"", "1/", "/2", "1//2", "a", "1/0", "1+2", "i*i", "1/2+*i"})
    CHECK_THROWS_AS(GaussianRational::parse(bad), std::invalid_argument);
}

namespace {

// Dense convolution over the group table, written independently of the
// sparse implementation.
std::vector<GaussianRational> dense(const GroupAlgebraElement& x, int order) {
  std::vector<GaussianRational> out(order);
  for (const auto& [h, c] : x.coeffs()) out[h] = c;
  return out;
}

GroupAlgebraElement random_algebra_element(const GroupPtr& h, SplitMix64& rng) {
  GroupAlgebraElement x(h);
  const int terms = rng.between(0, h->order());
  for (int k = 0; k < terms; ++k) x.add(static_cast<Element>(rng.below(h->order())), random_scalar(rng));
  return x;
}

}  // namespace

TEST_CASE("group algebra") {
  auto h = s3();
  const int n = h->order();
  CHECK(GroupAlgebraElement::one(h).trace() == GaussianRational(1));
  for (Element g = 1; g < n; ++g) CHECK(GroupAlgebraElement::basis(h, g).trace().is_zero());

  SplitMix64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    auto x = random_algebra_element(h, rng);
    auto y = random_algebra_element(h, rng);
    auto z = random_algebra_element(h, rng);
    auto dx = dense(x, n), dy = dense(y, n);
    std::vector<GaussianRational> conv(n);
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) conv[h->mul(a, b)] += dx[a] * dy[b];
    CHECK(dense(x * y, n) == conv);
    GaussianRational pairing;
    for (Element a = 0; a < n; ++a) pairing += dx[a] * dy[h->inv(a)];
    CHECK((x * y).trace() == pairing);
    CHECK((x * y).trace() == (y * x).trace());
    CHECK((x * y) * z == x * (y * z));
    CHECK((x * y).star() == y.star() * x.star());
    CHECK(x.star().star() == x);
    for (const auto& [g, c] : (x - x).coeffs()) CHECK(!c.is_zero());
    CHECK((x - x).is_zero());
  }

  for (const auto& k : all_subgroups(h)) {
    auto e = GroupAlgebraElement::averaging(k);
    CHECK(e * e == e);
    CHECK(e.star() == e);
    CHECK(e.trace() == GaussianRational::fraction(1, k.order()));
  }
  CHECK_THROWS_AS(GroupAlgebraElement::one(h) + GroupAlgebraElement::one(cyclic(6)), SpecMismatch);
  CHECK_THROWS_AS(GroupAlgebraElement::basis(h, 6), IndexOutOfRange);
}

TEST_CASE("group ring of G") {
  auto spec = s3_double();
  auto one = GGroupRingElement::one(spec);
  CHECK(tr_G(one) == GaussianRational(1));
  SplitMix64 rng(11);
  for (int k = 0; k < 50; ++k) {
    NormalForm g = random_element(*spec, rng, 4);
    if (!g.is_identity()) CHECK(tr_G(GGroupRingElement::basis(spec, g)).is_zero());
  }
  NormalForm s = spec->letter(RawLetter::a(first_involution(*spec->amalgam_spec().A)));
  auto half = (one + GGroupRingElement::basis(spec, s)) * GaussianRational::fraction(1, 2);
  CHECK(tr_G(half) == GaussianRational::fraction(1, 2));
  CHECK(half * half == half);

  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_group_ring_element(spec, rng, 4, 3);
    auto b = random_group_ring_element(spec, rng, 4, 3);
    CHECK(tr_G(a * b) == tr_G(b * a));
    CHECK((a * b).star() == b.star() * a.star());
    GaussianRational sum;  // tr_G(a a*) = sum |lambda_g|^2
    for (const auto& [g, c] : a.coeffs()) sum += GaussianRational(c.norm());
    CHECK(tr_G(a * a.star()) == sum);
  }

  Polynomial p{{GaussianRational(0), GaussianRational(-1), GaussianRational(1)}};
  CHECK(evaluate(p, half).is_zero());
  CHECK(p.degree() == 2);
  CHECK(p.to_string() == "(-1)x + (1)x^2");

  std::vector<NormalForm> not_closed{
      spec->identity(), spec->letter(RawLetter::a(first_of_order(*spec->amalgam_spec().A, 3)))};
  CHECK_THROWS_AS(GGroupRingElement::averaging(spec, not_closed), ValidationError);
  CHECK_THROWS_AS(one + GGroupRingElement::one(s3_hnn()), SpecMismatch);
}
