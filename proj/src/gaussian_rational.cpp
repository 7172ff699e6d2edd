#include "treetrace/gaussian_rational.hpp"

#include <stdexcept>

namespace treetrace {

namespace {

mpq_class parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t start = text[0] == '-' || text[0] == '+' ? 1 : 0;
  bool slash = false, digit = false;
  for (std::size_t k = start; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '/' && !slash && digit && k + 1 < text.size()) {
      slash = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    digit = true;
  }
  if (!digit) throw std::invalid_argument("bad rational '" + std::string(text) + "'");
  std::string s(text[0] == '+' ? text.substr(1) : text);
  mpq_class q;
  if (q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0)
    throw std::invalid_argument("bad rational '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

}  // namespace

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational GaussianRational::fraction(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  return GaussianRational(mpq_class(num, den));
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  im_ = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  const mpq_class n = o.norm();
  if (sgn(n) == 0) throw std::domain_error("division by zero");
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = im_.get_str() + "*i";
  if (sgn(re_) == 0) return imag;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + imag;
}

GaussianRational GaussianRational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty scalar");
  if (text.back() != 'i') return GaussianRational(parse_rational(text));
  std::string_view body = text.substr(0, text.size() - 1);
  if (!body.empty() && body.back() == '*') {
    body.remove_suffix(1);
    if (body.empty() || body.back() < '0' || body.back() > '9')
      throw std::invalid_argument("bad scalar '" + std::string(text) + "'");
  }
  // The imaginary part starts at the last sign that is not the first char.
  std::size_t split = 0;
  for (std::size_t k = body.size(); k-- > 1;)
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  std::string_view real = body.substr(0, split);
  std::string_view imag = body.substr(split);
  mpq_class im;
  if (imag.empty() || imag == "+")
    im = 1;
  else if (imag == "-")
    im = -1;
  else
    im = parse_rational(imag);
  return GaussianRational(real.empty() ? mpq_class(0) : parse_rational(real), im);
}

GaussianRational random_scalar(SplitMix64& rng) {
  mpq_class re(rng.between(-5, 5), rng.between(1, 4));
  mpq_class im = 0;
  if (rng.coin()) im = mpq_class(rng.between(-5, 5), rng.between(1, 4));
  return GaussianRational(re, im);
}

GaussianRational random_nonzero_scalar(SplitMix64& rng) {
  GaussianRational c;
  do c = random_scalar(rng);
  while (c.is_zero());
  return c;
}

}  // namespace treetrace
