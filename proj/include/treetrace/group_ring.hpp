#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "treetrace/gaussian_rational.hpp"
#include "treetrace/graph_of_groups.hpp"
#include "treetrace/random.hpp"

namespace treetrace {

/// Finitely supported element sum lambda_g g of the group ring of G.
class GGroupRingElement {
 public:
  explicit GGroupRingElement(std::shared_ptr<const GraphOfGroups> spec) : spec_(std::move(spec)) {}

  static GGroupRingElement one(const std::shared_ptr<const GraphOfGroups>& spec);
  static GGroupRingElement basis(const std::shared_ptr<const GraphOfGroups>& spec, const NormalForm& g,
                                 GaussianRational c = 1);
  /// (1/|K|) * sum of the given group elements, which must form a finite subgroup.
  static GGroupRingElement averaging(const std::shared_ptr<const GraphOfGroups>& spec,
                                     std::span<const NormalForm> members);

  const GraphOfGroups& spec() const { return *spec_; }
  const std::shared_ptr<const GraphOfGroups>& spec_ptr() const { return spec_; }
  const std::map<NormalForm, GaussianRational>& coeffs() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  void add(const NormalForm& g, const GaussianRational& c);

  GGroupRingElement& operator+=(const GGroupRingElement& o);
  GGroupRingElement& operator*=(const GaussianRational& c);
  friend GGroupRingElement operator+(GGroupRingElement a, const GGroupRingElement& b) { return a += b; }
  friend GGroupRingElement operator*(GGroupRingElement a, const GaussianRational& c) { return a *= c; }
  friend GGroupRingElement operator*(const GGroupRingElement& a, const GGroupRingElement& b);

  /// sum lambda_g g  ->  sum conj(lambda_g) g^-1
  GGroupRingElement star() const;

  friend bool operator==(const GGroupRingElement& a, const GGroupRingElement& b) {
    return a.spec_->id() == b.spec_->id() && a.coeffs_ == b.coeffs_;
  }

  std::string to_string() const;

 private:
  void check(const GGroupRingElement& o) const;

  std::shared_ptr<const GraphOfGroups> spec_;
  std::map<NormalForm, GaussianRational> coeffs_;
};

/// Coefficient of the identity.
GaussianRational tr_G(const GGroupRingElement& a);

/// p(x) = coeffs[0] + coeffs[1] x + ...
struct Polynomial {
  std::vector<GaussianRational> coeffs;

  int degree() const;
  GaussianRational constant() const { return coeffs.empty() ? GaussianRational() : coeffs[0]; }
  std::string to_string() const;
};

GGroupRingElement evaluate(const Polynomial& p, const GGroupRingElement& a);

/// Random element with 1..max_support terms of word length <= max_word_length.
/// The identity is included with probability 1/4 so traces are not always 0.
GGroupRingElement random_group_ring_element(const std::shared_ptr<const GraphOfGroups>& spec,
                                            SplitMix64& rng, int max_support, int max_word_length);

Polynomial random_polynomial(SplitMix64& rng, int max_degree);

}  // namespace treetrace
