#include "treetrace/group_ring.hpp"

#include "treetrace/errors.hpp"
#include "treetrace/sampling.hpp"

namespace treetrace {

GGroupRingElement GGroupRingElement::one(const std::shared_ptr<const GraphOfGroups>& spec) {
  return basis(spec, spec->identity());
}

GGroupRingElement GGroupRingElement::basis(const std::shared_ptr<const GraphOfGroups>& spec,
                                           const NormalForm& g, GaussianRational c) {
  spec->check_form(g);
  GGroupRingElement a(spec);
  a.add(g, c);
  return a;
}

GGroupRingElement GGroupRingElement::averaging(const std::shared_ptr<const GraphOfGroups>& spec,
                                               std::span<const NormalForm> members) {
  GGroupRingElement a(spec);
  if (members.empty()) throw ValidationError("averaging over an empty set");
  const auto c = GaussianRational::fraction(1, static_cast<long>(members.size()));
  for (const auto& g : members) {
    spec->check_form(g);
    a.add(g, c);
  }
  if (a.support_size() != members.size()) throw ValidationError("averaging set has repeated elements");
  for (const auto& x : members)
    for (const auto& y : members)
      if (!a.coeffs_.count(spec->multiply(x, y)))
        throw ValidationError("averaging set is not closed under multiplication");
  return a;
}

void GGroupRingElement::check(const GGroupRingElement& o) const {
  if (o.spec_->id() != spec_->id()) throw SpecMismatch("group ring elements of different groups");
}

void GGroupRingElement::add(const NormalForm& g, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = coeffs_.emplace(g, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) coeffs_.erase(it);
}

GGroupRingElement& GGroupRingElement::operator+=(const GGroupRingElement& o) {
  check(o);
  for (const auto& [g, c] : o.coeffs_) add(g, c);
  return *this;
}

GGroupRingElement& GGroupRingElement::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [g, x] : coeffs_) x *= c;
  return *this;
}

GGroupRingElement operator*(const GGroupRingElement& a, const GGroupRingElement& b) {
  a.check(b);
  GGroupRingElement out(a.spec_);
  for (const auto& [x, c] : a.coeffs_)
    for (const auto& [y, d] : b.coeffs_) out.add(a.spec_->multiply(x, y), c * d);
  return out;
}

GGroupRingElement GGroupRingElement::star() const {
  GGroupRingElement out(spec_);
  for (const auto& [g, c] : coeffs_) out.add(spec_->invert(g), c.conj());
  return out;
}

std::string GGroupRingElement::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : coeffs_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")" + spec_->to_string(g);
  }
  return out;
}

GaussianRational tr_G(const GGroupRingElement& a) {
  auto it = a.coeffs().find(a.spec().identity());
  return it == a.coeffs().end() ? GaussianRational() : it->second;
}

int Polynomial::degree() const {
  for (std::size_t k = coeffs.size(); k-- > 0;)
    if (!coeffs[k].is_zero()) return static_cast<int>(k);
  return -1;
}

std::string Polynomial::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + coeffs[k].to_string() + ")";
    if (k >= 1) out += "x";
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

GGroupRingElement evaluate(const Polynomial& p, const GGroupRingElement& a) {
  GGroupRingElement out(a.spec_ptr());
  GGroupRingElement power = GGroupRingElement::one(a.spec_ptr());
  for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
    if (k > 0) power = power * a;
    out += power * p.coeffs[k];
  }
  return out;
}

GGroupRingElement random_group_ring_element(const std::shared_ptr<const GraphOfGroups>& spec,
                                            SplitMix64& rng, int max_support, int max_word_length) {
  GGroupRingElement a(spec);
  const int terms = rng.between(1, max_support);
  for (int k = 0; k < terms; ++k) {
    NormalForm g = k == 0 && rng.below(4) == 0 ? spec->identity()
                                                : random_element(*spec, rng, max_word_length);
    a.add(g, random_nonzero_scalar(rng));
  }
  return a;
}

Polynomial random_polynomial(SplitMix64& rng, int max_degree) {
  Polynomial p;
  const int degree = rng.between(1, max_degree);
  for (int k = 0; k <= degree; ++k) p.coeffs.push_back(random_scalar(rng));
  if (p.coeffs.back().is_zero()) p.coeffs.back() = 1;
  return p;
}

}  // namespace treetrace
