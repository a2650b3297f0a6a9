#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hysim {

// Exact rational coefficients for the symbolic layer.  GMP does the heavy
// lifting; we only add the few conversions the rest of the code needs.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Complex value with exact rational real/imaginary parts.  Only the
// operations used by the ladder-variable expansion are provided.
struct GaussianRational {
  Rational re = 0;
  Rational im = 0;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit GaussianRational(const Rational& r) : re(r), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianRational operator*(const GaussianRational& o) const {
    return {Rational(re * o.re - im * o.im), Rational(re * o.im + im * o.re)};
  }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational operator*(const Rational& s) const { return {Rational(re * s), Rational(im * s)}; }
};

}  // namespace hysim
