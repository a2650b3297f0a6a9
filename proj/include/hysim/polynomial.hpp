#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "hysim/coords.hpp"
#include "hysim/errors.hpp"
#include "hysim/rational.hpp"

namespace hysim {

// Coefficient policy.  Rational coefficients are exact: the bracket axioms
// (antisymmetry, Leibniz, Jacobi) hold as literal zero-polynomial identities.
// double coefficients are the fallback for irrational inputs (sqrt(2) factors
// from state expansions, matrix elements); on that path only terms whose
// coefficient is exactly 0.0 are dropped by arithmetic, and classification
// applies a magnitude threshold instead.
template <typename C>
struct CoeffTraits;

template <>
struct CoeffTraits<double> {
  using Complex = std::complex<double>;
  static bool is_zero(double c) { return c == 0.0; }
  static bool negligible(double c, double eps) { return std::abs(c) <= eps; }
  static bool negligible(const Complex& c, double eps) {
    return std::abs(c.real()) <= eps && std::abs(c.imag()) <= eps;
  }
  static double to_double(double c) { return c; }
  static Complex make(long rn, long rd, long in, long id) {
    return {static_cast<double>(rn) / static_cast<double>(rd),
            static_cast<double>(in) / static_cast<double>(id)};
  }
};

template <>
struct CoeffTraits<Rational> {
  using Complex = GaussianRational;
  static bool is_zero(const Rational& c) { return c == 0; }
  static bool negligible(const Rational& c, double) { return c == 0; }
  static bool negligible(const Complex& c, double) { return c.is_zero(); }
  static double to_double(const Rational& c) { return c.get_d(); }
  static Complex make(long rn, long rd, long in, long id) {
    return {rational(rn, rd), rational(in, id)};
  }
};

// Exponent vector over the flat hybrid coordinates; same length for every
// term of a given polynomial (Dims::total_coords()).
using Monomial = std::vector<std::uint16_t>;

inline int monomial_degree(const Monomial& m, int begin, int end) {
  int d = 0;
  for (int i = begin; i < end; ++i) d += m[i];
  return d;
}

// Sparse multivariate polynomial over the hybrid phase space.  Canonical
// form: no stored term has a zero coefficient; term order is the map order
// (lexicographic in the exponent vector), which makes iteration, printing
// and hashing deterministic.
template <typename C>
class Polynomial {
 public:
  using TermMap = std::map<Monomial, C>;

  explicit Polynomial(Dims dims) : dims_(dims) {
    if (dims.n_cl < 0 || dims.n_qm < 0) throw DimensionError("negative sector dimension");
  }

  static Polynomial constant(Dims dims, C value) {
    Polynomial p(dims);
    if (!CoeffTraits<C>::is_zero(value)) {
      p.terms_.emplace(Monomial(dims.total_coords(), 0), std::move(value));
    }
    return p;
  }

  static Polynomial variable(Dims dims, int coord) {
    if (coord < 0 || coord >= dims.total_coords()) {
      throw DimensionError("variable index out of range");
    }
    Polynomial p(dims);
    Monomial m(dims.total_coords(), 0);
    m[coord] = 1;
    p.terms_.emplace(std::move(m), C(1));
    return p;
  }

  static Polynomial monomial(Dims dims, Monomial m, C value) {
    if (static_cast<int>(m.size()) != dims.total_coords()) {
      throw DimensionError("monomial length does not match dims");
    }
    Polynomial p(dims);
    if (!CoeffTraits<C>::is_zero(value)) p.terms_.emplace(std::move(m), std::move(value));
    return p;
  }

  Dims dims() const { return dims_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Monomial& m, const C& value) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (!CoeffTraits<C>::is_zero(value)) terms_.emplace(m, value);
    } else {
      it->second += value;
      if (CoeffTraits<C>::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    require_same_dims(dims_, o.dims_, "polynomial add");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    require_same_dims(dims_, o.dims_, "polynomial subtract");
    for (const auto& [m, c] : o.terms_) add_term(m, C(-c));
    return *this;
  }
  Polynomial& operator*=(const C& s) {
    if (CoeffTraits<C>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }
  friend Polynomial operator*(const C& s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [m, c] : a.terms_) c = C(-c);
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_dims(a.dims_, b.dims_, "polynomial multiply");
    Polynomial out(a.dims_);
    const int nv = a.dims_.total_coords();
    Monomial m(nv, 0);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (int v = 0; v < nv; ++v) {
          const int e = int(ma[v]) + int(mb[v]);
          m[v] = static_cast<std::uint16_t>(e);
        }
        out.add_term(m, C(ca * cb));
      }
    }
    return out;
  }

  Polynomial pow(unsigned k) const {
    Polynomial out = constant(dims_, C(1));
    Polynomial base = *this;
    while (k > 0) {
      if (k & 1u) out = out * base;
      base = (k >>= 1) ? base * base : base;
    }
    return out;
  }

  Polynomial derivative(int coord) const {
    if (coord < 0 || coord >= dims_.total_coords()) {
      throw DimensionError("derivative coordinate out of range");
    }
    Polynomial out(dims_);
    for (const auto& [m, c] : terms_) {
      if (m[coord] == 0) continue;
      Monomial d = m;
      const int e = d[coord]--;
      out.add_term(d, C(c * C(e)));
    }
    return out;
  }

  // Evaluate at a flat coordinate array (layout per coords.hpp).
  double eval(std::span<const double> coords) const {
    if (static_cast<int>(coords.size()) != dims_.total_coords()) {
      throw DimensionError("evaluation point has wrong length");
    }
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = CoeffTraits<C>::to_double(c);
      for (std::size_t v = 0; v < m.size(); ++v) {
        for (int e = 0; e < m[v]; ++e) t *= coords[v];
      }
      sum += t;
    }
    return sum;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m, 0, dims_.total_coords()));
    return d;
  }
  int cl_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m, 0, 2 * dims_.n_cl));
    return d;
  }
  int qm_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_)
      d = std::max(d, monomial_degree(m, 2 * dims_.n_cl, dims_.total_coords()));
    return d;
  }

  bool uses_classical_vars() const { return cl_degree() > 0; }
  bool uses_quantum_vars() const { return qm_degree() > 0; }

  // Drop terms with |coefficient| <= eps (no-op on the rational path where
  // arithmetic is already exact).
  Polynomial pruned(double eps) const {
    Polynomial out(dims_);
    for (const auto& [m, c] : terms_) {
      if (!CoeffTraits<C>::negligible(c, eps)) out.terms_.emplace(m, c);
    }
    return out;
  }

  // Keep only the terms whose quantum-sector degree equals k.
  Polynomial qm_degree_part(int k) const {
    Polynomial out(dims_);
    for (const auto& [m, c] : terms_) {
      if (monomial_degree(m, 2 * dims_.n_cl, dims_.total_coords()) == k) out.terms_.emplace(m, c);
    }
    return out;
  }

  // Re-embed into a larger hybrid space; existing variables keep their roles.
  Polynomial with_dims(Dims nd) const {
    if (nd.n_cl < dims_.n_cl || nd.n_qm < dims_.n_qm) {
      throw DimensionError("with_dims cannot shrink a polynomial's space");
    }
    Polynomial out(nd);
    for (const auto& [m, c] : terms_) {
      Monomial nm(nd.total_coords(), 0);
      for (int k = 0; k < 2 * dims_.n_cl; ++k) nm[k] = m[k];
      for (int q = 0; q < 2 * dims_.n_qm; ++q) nm[2 * nd.n_cl + q] = m[2 * dims_.n_cl + q];
      out.terms_.emplace(std::move(nm), c);
    }
    return out;
  }

  bool operator==(const Polynomial& o) const { return dims_ == o.dims_ && terms_ == o.terms_; }

 private:
  Dims dims_;
  TermMap terms_;
};

inline Polynomial<double> to_double(const Polynomial<Rational>& p) {
  Polynomial<double> out(p.dims());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.get_d());
  return out;
}

namespace detail {

// {A,B} restricted to coordinate pairs [pair_begin, pair_end).
template <typename C>
Polynomial<C> sector_bracket(const Polynomial<C>& a, const Polynomial<C>& b, int pair_begin,
                             int pair_end) {
  require_same_dims(a.dims(), b.dims(), "bracket");
  Polynomial<C> out(a.dims());
  for (int q = pair_begin; q < pair_end; q += 2) {
    const int p = q + 1;
    out += a.derivative(q) * b.derivative(p);
    out -= a.derivative(p) * b.derivative(q);
  }
  return out;
}

}  // namespace detail

// Classical Poisson bracket: sum_k dA/dx_k dB/dp_k - dA/dp_k dB/dx_k.
template <typename C>
Polynomial<C> cl_bracket(const Polynomial<C>& a, const Polynomial<C>& b) {
  return detail::sector_bracket(a, b, 0, 2 * a.dims().n_cl);
}

// Quantum-sector Poisson bracket over the oscillator coordinates (X_i, P_i).
template <typename C>
Polynomial<C> qm_bracket(const Polynomial<C>& a, const Polynomial<C>& b) {
  require_same_dims(a.dims(), b.dims(), "bracket");
  return detail::sector_bracket(a, b, 2 * a.dims().n_cl, a.dims().total_coords());
}

// Generalized hybrid bracket: the sum of the two sector brackets.
template <typename C>
Polynomial<C> hybrid_bracket(const Polynomial<C>& a, const Polynomial<C>& b) {
  return cl_bracket(a, b) + qm_bracket(a, b);
}

}  // namespace hysim
