#include "treetrace/h_module.hpp"

#include "treetrace/errors.hpp"

namespace treetrace {

HModuleMatrix::HModuleMatrix(GroupPtr group, int m, int n)
    : group_(std::move(group)), m_(m), n_(n) {
  if (m < 0 || n < 1) throw ValidationError("bad module matrix shape");
  entries_.assign(static_cast<std::size_t>(size()) * size(), GroupAlgebraElement(group_));
}

HModuleMatrix HModuleMatrix::identity(const GroupPtr& group, int m, int n) {
  HModuleMatrix x(group, m, n);
  for (int i = 0; i < x.size(); ++i) x.at(i, i) = GroupAlgebraElement::one(group);
  return x;
}

HModuleMatrix HModuleMatrix::blocks(const HModuleMatrix& a, const HModuleMatrix& b,
                                    const HModuleMatrix& c, const HModuleMatrix& d) {
  a.check_shape(b);
  a.check_shape(c);
  a.check_shape(d);
  const int k = a.size();
  HModuleMatrix x(a.group_, k, 2);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      x.at(i, j) = a.at(i, j);
      x.at(i, k + j) = b.at(i, j);
      x.at(k + i, j) = c.at(i, j);
      x.at(k + i, k + j) = d.at(i, j);
    }
  return x;
}

HModuleMatrix HModuleMatrix::direct_sum(const HModuleMatrix& a, const HModuleMatrix& b) {
  const int k = a.size();
  HModuleMatrix x(a.group_, k + b.size(), 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) x.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.size(); ++i)
    for (int j = 0; j < b.size(); ++j) x.at(k + i, k + j) = b.at(i, j);
  return x;
}

void HModuleMatrix::check_shape(const HModuleMatrix& o) const {
  if (m_ != o.m_ || n_ != o.n_) throw ValidationError("module matrices of different shapes");
}

HModuleMatrix& HModuleMatrix::operator+=(const HModuleMatrix& o) {
  check_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

HModuleMatrix& HModuleMatrix::operator-=(const HModuleMatrix& o) {
  check_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

namespace {

// A module matrix over Z[i]H with one common denominator, so products run on
// integers and only the final entries are reduced.
struct IntegerForm {
  struct Term {
    Element g;
    mpz_class re, im;
  };
  mpz_class den = 1;
  std::vector<std::vector<Term>> entries;  // row-major, like HModuleMatrix
};

IntegerForm integer_form(const HModuleMatrix& x) {
  IntegerForm out;
  const int k = x.size();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (const auto& [g, c] : x.at(i, j).coeffs()) {
        mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.im().get_den_mpz_t());
      }
  out.entries.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (const auto& [g, c] : x.at(i, j).coeffs())
        out.entries[static_cast<std::size_t>(i) * k + j].push_back(
            {g, c.re().get_num() * (out.den / c.re().get_den()), c.im().get_num() * (out.den / c.im().get_den())});
  return out;
}

}  // namespace

HModuleMatrix operator*(const HModuleMatrix& a, const HModuleMatrix& b) {
  a.check_shape(b);
  const int k = a.size();
  const FiniteGroup& g = *a.group_;
  const int order = g.order();
  const IntegerForm x = integer_form(a), y = integer_form(b);
  std::vector<mpz_class> re(static_cast<std::size_t>(order)), im(static_cast<std::size_t>(order));
  const mpz_class den = x.den * y.den;
  HModuleMatrix out(a.group_, a.m_, a.n_);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      bool any = false;
      for (int l = 0; l < k; ++l) {
        const auto& u = x.entries[static_cast<std::size_t>(i) * k + l];
        const auto& v = y.entries[static_cast<std::size_t>(l) * k + j];
        if (u.empty() || v.empty()) continue;
        if (!any) {
          for (int h = 0; h < order; ++h) re[h] = 0, im[h] = 0;
          any = true;
        }
        for (const auto& s : u)
          for (const auto& t : v) {
            const int h = g.mul(s.g, t.g);
            mpz_addmul(re[h].get_mpz_t(), s.re.get_mpz_t(), t.re.get_mpz_t());
            mpz_submul(re[h].get_mpz_t(), s.im.get_mpz_t(), t.im.get_mpz_t());
            mpz_addmul(im[h].get_mpz_t(), s.re.get_mpz_t(), t.im.get_mpz_t());
            mpz_addmul(im[h].get_mpz_t(), s.im.get_mpz_t(), t.re.get_mpz_t());
          }
      }
      if (!any) continue;
      auto& entry = out.at(i, j);
      for (int h = 0; h < order; ++h) {
        if (sgn(re[h]) == 0 && sgn(im[h]) == 0) continue;
        mpq_class r(re[h], den), c(im[h], den);
        r.canonicalize();
        c.canonicalize();
        entry.add(h, GaussianRational(r, c));
      }
    }
  return out;
}

HModuleMatrix operator*(HModuleMatrix a, const GaussianRational& c) {
  for (auto& x : a.entries_) x *= c;
  return a;
}

HModuleMatrix HModuleMatrix::adjoint() const {
  HModuleMatrix out(group_, m_, n_);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) out.at(j, i) = at(i, j).star();
  return out;
}

bool HModuleMatrix::is_zero() const {
  for (const auto& x : entries_)
    if (!x.is_zero()) return false;
  return true;
}

std::optional<std::pair<int, int>> HModuleMatrix::first_difference(const HModuleMatrix& o) const {
  check_shape(o);
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (!(at(i, j) == o.at(i, j))) return std::make_pair(i, j);
  return std::nullopt;
}

HModuleMatrix HModuleMatrix::pad(int new_m) const {
  if (new_m < m_) throw ValidationError("pad cannot shrink a module matrix");
  HModuleMatrix out(group_, new_m, n_);
  for (int a = 0; a < n_; ++a)
    for (int i = 0; i < m_; ++i)
      for (int b = 0; b < n_; ++b)
        for (int j = 0; j < m_; ++j) out.at(a * new_m + i, b * new_m + j) = at(a * m_ + i, b * m_ + j);
  return out;
}

ScalarMatrix operator*(const ScalarMatrix& a, const ScalarMatrix& b) {
  if (a.cols != b.rows) throw ValidationError("scalar matrix shapes do not match");
  ScalarMatrix out(a.group, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int l = 0; l < a.cols; ++l) {
      const auto& x = a.at(i, l);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.cols; ++j)
        if (!b.at(l, j).is_zero()) out.at(i, j) += x * b.at(l, j);
    }
  return out;
}

ScalarMatrix ScalarMatrix::adjoint() const {
  ScalarMatrix out(group, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(j, i) = at(i, j).conj();
  return out;
}

ScalarMatrix regular_representation(const GroupAlgebraElement& x) {
  const FiniteGroup& g = *x.group();
  ScalarMatrix out(x.group(), g.order(), g.order());
  for (const auto& [a, c] : x.coeffs())
    for (Element h = 0; h < g.order(); ++h) out.at(g.mul(a, h), h) = c;
  return out;
}

ScalarMatrix regular_representation(const HModuleMatrix& x) {
  const FiniteGroup& g = *x.group();
  const int order = g.order();
  ScalarMatrix out(x.group(), x.size() * order, x.size() * order);
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < x.size(); ++j)
      for (const auto& [a, c] : x.at(i, j).coeffs())
        for (Element h = 0; h < order; ++h) out.at(i * order + g.mul(a, h), j * order + h) = c;
  return out;
}

namespace {

struct GaussInt {
  mpz_class re, im;

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

// Scratch space for one Bareiss update, reused to avoid allocations.
struct BareissStep {
  mpz_class re, im, norm, t;

  // x = (p x - l y) / d, exactly; the Bareiss invariant guarantees divisibility.
  void update(GaussInt& x, const GaussInt& p, const GaussInt& l, const GaussInt& y, const GaussInt& d) {
    mpz_mul(re.get_mpz_t(), p.re.get_mpz_t(), x.re.get_mpz_t());
    mpz_submul(re.get_mpz_t(), p.im.get_mpz_t(), x.im.get_mpz_t());
    mpz_mul(im.get_mpz_t(), p.re.get_mpz_t(), x.im.get_mpz_t());
    mpz_addmul(im.get_mpz_t(), p.im.get_mpz_t(), x.re.get_mpz_t());
    if (!l.is_zero() && !y.is_zero()) {
      mpz_submul(re.get_mpz_t(), l.re.get_mpz_t(), y.re.get_mpz_t());
      mpz_addmul(re.get_mpz_t(), l.im.get_mpz_t(), y.im.get_mpz_t());
      mpz_submul(im.get_mpz_t(), l.re.get_mpz_t(), y.im.get_mpz_t());
      mpz_submul(im.get_mpz_t(), l.im.get_mpz_t(), y.re.get_mpz_t());
    }
    if (sgn(d.im) == 0) {
      divide(x.re, re, d.re);
      divide(x.im, im, d.re);
      return;
    }
    // (re + i im) / (a + i b) = ((re a + im b) + i (im a - re b)) / (a^2 + b^2)
    mpz_mul(norm.get_mpz_t(), d.re.get_mpz_t(), d.re.get_mpz_t());
    mpz_addmul(norm.get_mpz_t(), d.im.get_mpz_t(), d.im.get_mpz_t());
    mpz_mul(t.get_mpz_t(), re.get_mpz_t(), d.re.get_mpz_t());
    mpz_addmul(t.get_mpz_t(), im.get_mpz_t(), d.im.get_mpz_t());
    mpz_mul(im.get_mpz_t(), im.get_mpz_t(), d.re.get_mpz_t());
    mpz_submul(im.get_mpz_t(), re.get_mpz_t(), d.im.get_mpz_t());
    divide(x.re, t, norm);
    divide(x.im, im, norm);
  }

  static void divide(mpz_class& out, const mpz_class& a, const mpz_class& b) {
    if (!mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()))
      throw NumericalFailure("inexact division in fraction-free elimination");
    mpz_divexact(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
};

}  // namespace

int exact_rank(const ScalarMatrix& x) {
  // Scale each nonzero row to Gaussian integers and drop empty columns.
  std::vector<int> live_cols;
  for (int j = 0; j < x.cols; ++j)
    for (int i = 0; i < x.rows; ++i)
      if (!x.at(i, j).is_zero()) {
        live_cols.push_back(j);
        break;
      }
  std::vector<std::vector<GaussInt>> m;
  for (int i = 0; i < x.rows; ++i) {
    mpz_class scale = 1;
    bool any = false;
    for (int j : live_cols) {
      const auto& z = x.at(i, j);
      if (z.is_zero()) continue;
      any = true;
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), z.re().get_den_mpz_t());
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), z.im().get_den_mpz_t());
    }
    if (!any) continue;
    std::vector<GaussInt> row;
    row.reserve(live_cols.size());
    for (int j : live_cols) {
      const auto& z = x.at(i, j);
      row.push_back({z.re().get_num() * (scale / z.re().get_den()), z.im().get_num() * (scale / z.im().get_den())});
    }
    m.push_back(std::move(row));
  }

  const std::size_t rows = m.size(), cols = live_cols.size();
  GaussInt prev{1, 0};
  BareissStep step;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    const GaussInt pivot = m[rank][c];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const GaussInt lead = m[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) step.update(m[i][j], pivot, lead, m[rank][j], prev);
      m[i][c] = {0, 0};
    }
    prev = pivot;
    ++rank;
  }
  return static_cast<int>(rank);
}

bool is_h_equivariant(const ScalarMatrix& x) {
  if (!x.group) return false;
  const FiniteGroup& g = *x.group;
  const int order = g.order();
  if (x.rows % order != 0 || x.cols % order != 0) return false;
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      const int bi = i / order * order, bj = j / order * order;
      const Element a = i % order, b = j % order;
      for (Element k = 1; k < order; ++k)
        if (!(x.at(bi + g.mul(a, k), bj + g.mul(b, k)) == x.at(i, j))) return false;
    }
  return true;
}

mpq_class vn_dimension(const ScalarMatrix& x, Subspace which) {
  if (!is_h_equivariant(x)) throw NotHEquivariant("matrix does not commute with the right H-action");
  const int rank = exact_rank(x);
  mpq_class dim(which == Subspace::Kernel ? x.cols - rank : rank, x.group->order());
  dim.canonicalize();
  return dim;
}

GaussianRational h_trace(const HModuleMatrix& x) {
  GaussianRational out;
  for (int i = 0; i < x.size(); ++i) out += x.at(i, i).trace();
  return out;
}

}  // namespace treetrace
