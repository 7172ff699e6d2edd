#pragma once

#include <map>
#include <string>

#include "treetrace/finite_group.hpp"
#include "treetrace/gaussian_rational.hpp"

namespace treetrace {

/// Element of the complex group algebra of a finite group H with Gaussian
/// rational coefficients. Zero coefficients are never stored.
class GroupAlgebraElement {
 public:
  GroupAlgebraElement() = default;
  explicit GroupAlgebraElement(GroupPtr group) : group_(std::move(group)) {}

  static GroupAlgebraElement zero(const GroupPtr& group) { return GroupAlgebraElement(group); }
  static GroupAlgebraElement one(const GroupPtr& group) { return basis(group, 0); }
  static GroupAlgebraElement basis(const GroupPtr& group, Element h, GaussianRational c = 1);
  /// (1/|K|) * sum of the members of K.
  static GroupAlgebraElement averaging(const Subgroup& k);

  const GroupPtr& group() const { return group_; }
  const std::map<Element, GaussianRational>& coeffs() const { return coeffs_; }
  GaussianRational coeff(Element h) const;
  bool is_zero() const { return coeffs_.empty(); }

  void add(Element h, const GaussianRational& c);

  GroupAlgebraElement& operator+=(const GroupAlgebraElement& o);
  GroupAlgebraElement& operator-=(const GroupAlgebraElement& o);
  GroupAlgebraElement& operator*=(const GaussianRational& c);
  friend GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement& b) {
    return a += b;
  }
  friend GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement& b) {
    return a -= b;
  }
  friend GroupAlgebraElement operator*(GroupAlgebraElement a, const GaussianRational& c) {
    return a *= c;
  }
  friend GroupAlgebraElement operator*(const GaussianRational& c, GroupAlgebraElement a) {
    return a *= c;
  }
  GroupAlgebraElement operator-() const { return *this * GaussianRational(-1); }
  /// Convolution.
  friend GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b);

  /// sum c_h h  ->  sum conj(c_h) h^-1
  GroupAlgebraElement star() const;
  /// Coefficient of the identity.
  GaussianRational trace() const { return coeff(0); }

  /// Zero elements compare equal regardless of their group pointer.
  friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  const GroupPtr& require_group(const GroupAlgebraElement& o);

  GroupPtr group_;
  std::map<Element, GaussianRational> coeffs_;
};

/// Trace of the identity coefficient; the free function form used in reports.
inline GaussianRational tr_H_algebra(const GroupAlgebraElement& x) { return x.trace(); }

}  // namespace treetrace
