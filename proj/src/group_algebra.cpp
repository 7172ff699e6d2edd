#include "treetrace/group_algebra.hpp"

#include "treetrace/errors.hpp"

namespace treetrace {

GroupAlgebraElement GroupAlgebraElement::basis(const GroupPtr& group, Element h, GaussianRational c) {
  if (h < 0 || h >= group->order()) throw IndexOutOfRange("group element " + std::to_string(h));
  GroupAlgebraElement x(group);
  x.add(h, c);
  return x;
}

GroupAlgebraElement GroupAlgebraElement::averaging(const Subgroup& k) {
  GroupAlgebraElement x(k.parent);
  const auto c = GaussianRational::fraction(1, k.order());
  for (Element a : k.members) x.add(a, c);
  return x;
}

GaussianRational GroupAlgebraElement::coeff(Element h) const {
  auto it = coeffs_.find(h);
  return it == coeffs_.end() ? GaussianRational() : it->second;
}

void GroupAlgebraElement::add(Element h, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = coeffs_.emplace(h, c);
  if (fresh) return;
  it->second += c;
  if (it->second.is_zero()) coeffs_.erase(it);
}

const GroupPtr& GroupAlgebraElement::require_group(const GroupAlgebraElement& o) {
  if (!group_) group_ = o.group_;
  if (o.group_ && o.group_ != group_ && !(*o.group_ == *group_))
    throw SpecMismatch("group algebra elements over different groups");
  return group_;
}

GroupAlgebraElement& GroupAlgebraElement::operator+=(const GroupAlgebraElement& o) {
  require_group(o);
  for (const auto& [h, c] : o.coeffs_) add(h, c);
  return *this;
}

GroupAlgebraElement& GroupAlgebraElement::operator-=(const GroupAlgebraElement& o) {
  require_group(o);
  for (const auto& [h, c] : o.coeffs_) add(h, -c);
  return *this;
}

GroupAlgebraElement& GroupAlgebraElement::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [h, x] : coeffs_) x *= c;
  return *this;
}

GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  GroupAlgebraElement out(a.group_ ? a.group_ : b.group_);
  if (a.is_zero() || b.is_zero()) return out;
  out.require_group(b);
  const FiniteGroup& g = *out.group_;
  for (const auto& [x, c] : a.coeffs_)
    for (const auto& [y, d] : b.coeffs_) out.add(g.mul(x, y), c * d);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::star() const {
  GroupAlgebraElement out(group_);
  for (const auto& [h, c] : coeffs_) out.coeffs_.emplace(group_->inv(h), c.conj());
  return out;
}

std::string GroupAlgebraElement::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [h, c] : coeffs_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")" + group_->label(h);
  }
  return out;
}

}  // namespace treetrace
