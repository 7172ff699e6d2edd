#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "treetrace/group_algebra.hpp"

namespace treetrace {

/// Square matrix over CH acting on (CH)^(n*m): n amplified copies of m
/// summands, summand index a*m + i. Entries act by left multiplication.
class HModuleMatrix {
 public:
  HModuleMatrix() = default;
  HModuleMatrix(GroupPtr group, int m, int n = 1);

  static HModuleMatrix identity(const GroupPtr& group, int m, int n = 1);
  /// [[a, b], [c, d]] with four blocks of equal size; the result has n = 2.
  static HModuleMatrix blocks(const HModuleMatrix& a, const HModuleMatrix& b, const HModuleMatrix& c,
                              const HModuleMatrix& d);
  /// Block diagonal; the result has n = 1.
  static HModuleMatrix direct_sum(const HModuleMatrix& a, const HModuleMatrix& b);

  const GroupPtr& group() const { return group_; }
  int m() const { return m_; }
  int n() const { return n_; }
  int size() const { return n_ * m_; }

  GroupAlgebraElement& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * size() + j]; }
  const GroupAlgebraElement& at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * size() + j];
  }

  HModuleMatrix& operator+=(const HModuleMatrix& o);
  HModuleMatrix& operator-=(const HModuleMatrix& o);
  friend HModuleMatrix operator+(HModuleMatrix a, const HModuleMatrix& b) { return a += b; }
  friend HModuleMatrix operator-(HModuleMatrix a, const HModuleMatrix& b) { return a -= b; }
  friend HModuleMatrix operator*(const HModuleMatrix& a, const HModuleMatrix& b);
  friend HModuleMatrix operator*(HModuleMatrix a, const GaussianRational& c);

  HModuleMatrix adjoint() const;
  bool is_zero() const;
  /// First (i, j) where the two matrices differ.
  std::optional<std::pair<int, int>> first_difference(const HModuleMatrix& o) const;
  friend bool operator==(const HModuleMatrix& a, const HModuleMatrix& b) {
    return a.m_ == b.m_ && a.n_ == b.n_ && !a.first_difference(b);
  }

  /// The same operator on m' >= m summands per copy, zero on the new ones.
  HModuleMatrix pad(int new_m) const;

 private:
  void check_shape(const HModuleMatrix& o) const;

  GroupPtr group_;
  int m_ = 0;
  int n_ = 1;
  std::vector<GroupAlgebraElement> entries_;
};

/// Exact complex matrix; row/column index = summand * |H| + group element
/// when it comes from a regular representation.
struct ScalarMatrix {
  GroupPtr group;  // null when the matrix carries no H-structure
  int rows = 0;
  int cols = 0;
  std::vector<GaussianRational> data;

  ScalarMatrix() = default;
  ScalarMatrix(GroupPtr g, int r, int c) : group(std::move(g)), rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  GaussianRational& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const GaussianRational& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  friend bool operator==(const ScalarMatrix& a, const ScalarMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }
  friend ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b);
  ScalarMatrix adjoint() const;
};

/// Left multiplication by x on CH in the group basis: entry (g h, h) = x_g.
ScalarMatrix regular_representation(const GroupAlgebraElement& x);
ScalarMatrix regular_representation(const HModuleMatrix& x);

/// Exact rank by fraction-free elimination over the Gaussian integers.
int exact_rank(const ScalarMatrix& x);

/// True if x commutes with the right-regular action of H on every summand.
bool is_h_equivariant(const ScalarMatrix& x);

enum class Subspace { Kernel, Image };

/// Complex dimension divided by |H|. Throws NotHEquivariant.
mpq_class vn_dimension(const ScalarMatrix& x, Subspace which);

/// Sum of the identity coefficients of the diagonal.
GaussianRational h_trace(const HModuleMatrix& x);

}  // namespace treetrace
