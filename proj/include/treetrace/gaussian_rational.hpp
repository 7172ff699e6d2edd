#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "treetrace/random.hpp"

namespace treetrace {

/// Exact a + b*i with a, b arbitrary-precision rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT: integers convert implicitly
  GaussianRational(mpq_class re, mpq_class im = 0);
  /// num/den + 0i; den must be nonzero.
  static GaussianRational fraction(long num, long den);
  static GaussianRational i() { return GaussianRational(0, 1); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);  // throws std::domain_error on zero

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// "3/2", "-1", "1/2+3*i", "-2/3*i". Inverse of parse().
  std::string to_string() const;
  /// Throws std::invalid_argument on malformed text.
  static GaussianRational parse(std::string_view text);

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

 private:
  mpq_class re_;
  mpq_class im_;
};

/// Small random Gaussian rational: numerators in [-5, 5], denominators in
/// [1, 4], imaginary part zero half of the time.
GaussianRational random_scalar(SplitMix64& rng);
/// Random nonzero scalar.
GaussianRational random_nonzero_scalar(SplitMix64& rng);

}  // namespace treetrace
