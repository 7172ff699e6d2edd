#pragma once

#include <map>
#include <set>
#include <utility>

#include "treetrace/errors.hpp"
#include "treetrace/group_algebra.hpp"

namespace treetrace {

/// Finite-support vector over a free H-set with basis indexed by Index: the
/// coordinate at t is the H-part of the summand t x H, as an element of CH.
template <class Index>
using OrbitVector = std::map<Index, GroupAlgebraElement>;

/// An H-equivariant operator on the free H-set with basis Index x {1},
/// stored as a sparse matrix over CH. Entry (s, t) acts on the H-coordinate
/// of t by left multiplication and lands in s.
///
/// Columns outside the declared column support are zero. Lifts restricted to
/// a column set are compressions, so products check that the inner supports
/// match instead of silently truncating.
template <class Index>
class OrbitOperator {
 public:
  using Key = std::pair<Index, Index>;  // (row, column)

  OrbitOperator() = default;
  OrbitOperator(GroupPtr group, std::set<Index> columns)
      : group_(std::move(group)), columns_(std::move(columns)) {}

  const GroupPtr& group() const { return group_; }
  const std::set<Index>& columns() const { return columns_; }
  const std::map<Key, GroupAlgebraElement>& entries() const { return entries_; }

  /// Rows holding a nonzero entry.
  std::set<Index> rows() const {
    std::set<Index> out;
    for (const auto& [k, x] : entries_) out.insert(k.first);
    return out;
  }
  /// Columns holding a nonzero entry; a subset of columns().
  std::set<Index> nonzero_columns() const {
    std::set<Index> out;
    for (const auto& [k, x] : entries_) out.insert(k.second);
    return out;
  }

  GroupAlgebraElement entry(const Index& row, const Index& col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? GroupAlgebraElement::zero(group_) : it->second;
  }

  OrbitVector<Index> column(const Index& col) const {
    OrbitVector<Index> out;
    for (const auto& [k, x] : entries_)
      if (k.second == col) out.emplace(k.first, x);
    return out;
  }

  void add(const Index& row, const Index& col, const GroupAlgebraElement& x) {
    if (!columns_.count(col)) throw IncompatibleSupports("entry outside the declared column support");
    if (x.is_zero()) return;
    auto [it, fresh] = entries_.emplace(Key{row, col}, x);
    if (fresh) return;
    it->second += x;
    if (it->second.is_zero()) entries_.erase(it);
  }

  OrbitOperator& operator+=(const OrbitOperator& o) {
    columns_.insert(o.columns_.begin(), o.columns_.end());
    for (const auto& [k, x] : o.entries_) add(k.first, k.second, x);
    return *this;
  }
  OrbitOperator& operator-=(const OrbitOperator& o) {
    columns_.insert(o.columns_.begin(), o.columns_.end());
    for (const auto& [k, x] : o.entries_) add(k.first, k.second, -x);
    return *this;
  }
  friend OrbitOperator operator+(OrbitOperator a, const OrbitOperator& b) { return a += b; }
  friend OrbitOperator operator-(OrbitOperator a, const OrbitOperator& b) { return a -= b; }

  /// Same nonzero entries; declared supports may differ.
  bool same_entries(const OrbitOperator& o) const { return entries_ == o.entries_; }
  friend bool operator==(const OrbitOperator& a, const OrbitOperator& b) {
    return a.columns_ == b.columns_ && a.entries_ == b.entries_;
  }

  /// Conjugate transpose with the CH involution. The adjoint's column
  /// support is the set of rows of this operator.
  OrbitOperator adjoint() const {
    OrbitOperator out(group_, rows());
    for (const auto& [k, x] : entries_) out.add(k.second, k.first, x.star());
    return out;
  }

  /// Columns restricted to cols and rows to rows.
  OrbitOperator restrict(const std::set<Index>& rows, const std::set<Index>& cols) const {
    std::set<Index> kept;
    for (const auto& c : cols)
      if (columns_.count(c)) kept.insert(c);
    OrbitOperator out(group_, kept);
    for (const auto& [k, x] : entries_)
      if (rows.count(k.first) && kept.count(k.second)) out.add(k.first, k.second, x);
    return out;
  }

  /// x * y. Throws IncompatibleSupports unless every row of y lies in the
  /// column support of x.
  friend OrbitOperator product(const OrbitOperator& x, const OrbitOperator& y) {
    for (const auto& r : y.rows())
      if (!x.columns_.count(r))
        throw IncompatibleSupports("product: a row of the right factor is outside the left factor's columns");
    std::map<Index, std::vector<std::pair<Index, const GroupAlgebraElement*>>> by_column;
    for (const auto& [k, a] : x.entries_) by_column[k.second].emplace_back(k.first, &a);
    OrbitOperator out(y.group_ ? y.group_ : x.group_, y.columns_);
    for (const auto& [k, b] : y.entries_) {
      auto it = by_column.find(k.first);
      if (it == by_column.end()) continue;
      for (const auto& [row, a] : it->second) out.add(row, k.second, *a * b);
    }
    return out;
  }

  OrbitVector<Index> apply(const OrbitVector<Index>& v) const {
    OrbitVector<Index> out;
    for (const auto& [k, a] : entries_) {
      auto it = v.find(k.second);
      if (it == v.end()) continue;
      auto [slot, fresh] = out.emplace(k.first, a * it->second);
      if (!fresh) slot->second += a * it->second;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
  }

  /// The same operator written in the basis t -> t * h_t. Indices missing
  /// from the map keep h_t = 1.
  OrbitOperator rebase(const std::map<Index, Element>& shift) const {
    auto h = [&](const Index& t) {
      auto it = shift.find(t);
      return GroupAlgebraElement::basis(group_, it == shift.end() ? 0 : it->second);
    };
    OrbitOperator out(group_, columns_);
    for (const auto& [k, x] : entries_) out.add(k.first, k.second, h(k.first).star() * x * h(k.second));
    return out;
  }

 private:
  GroupPtr group_;
  std::set<Index> columns_;
  std::map<Key, GroupAlgebraElement> entries_;
};

/// Sum over the basis of the identity coefficients of the diagonal entries.
template <class Index>
GaussianRational tr_H_orbit(const OrbitOperator<Index>& op) {
  GaussianRational out;
  for (const auto& [k, x] : op.entries())
    if (k.first == k.second) out += x.trace();
  return out;
}

/// CH-valued inner product sum_t x_t^* y_t.
template <class Index>
GroupAlgebraElement inner_product(const OrbitVector<Index>& x, const OrbitVector<Index>& y,
                                  const GroupPtr& group) {
  GroupAlgebraElement out(group);
  for (const auto& [t, a] : x) {
    auto it = y.find(t);
    if (it != y.end()) out += a.star() * it->second;
  }
  return out;
}

}  // namespace treetrace
