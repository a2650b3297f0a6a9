// Test-only oracles and generators.  Everything here is independent of the
// symbolic/integrator code paths it is used to check: numeric brackets come
// from finite differences, expectations from direct matrix algebra, and the
// random generators only use the public constructors.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hysim/observables.hpp"
#include "hysim/phase.hpp"
#include "hysim/polynomial.hpp"
#include "hysim/rng.hpp"

namespace hysim::testing {

// Central finite-difference Poisson bracket at a point; sums over the chosen
// coordinate pairs.  Step h balances truncation vs roundoff.
template <typename C>
double fd_bracket(const Polynomial<C>& a, const Polynomial<C>& b, std::vector<double> at,
                  int pair_begin, int pair_end, double h = 1e-5) {
  auto partial = [&](const Polynomial<C>& f, int v) {
    std::vector<double> plus = at, minus = at;
    plus[v] += h;
    minus[v] -= h;
    return (f.eval(plus) - f.eval(minus)) / (2.0 * h);
  };
  double sum = 0.0;
  for (int q = pair_begin; q < pair_end; q += 2) {
    sum += partial(a, q) * partial(b, q + 1) - partial(a, q + 1) * partial(b, q);
  }
  return sum;
}

template <typename C>
double fd_cl_bracket(const Polynomial<C>& a, const Polynomial<C>& b, std::vector<double> at) {
  return fd_bracket(a, b, std::move(at), 0, 2 * a.dims().n_cl);
}

template <typename C>
double fd_qm_bracket(const Polynomial<C>& a, const Polynomial<C>& b, std::vector<double> at) {
  return fd_bracket(a, b, std::move(at), 2 * a.dims().n_cl, a.dims().total_coords());
}

inline std::vector<double> random_point(Prng& rng, int size, double scale = 1.0) {
  std::vector<double> p(size);
  for (double& c : p) c = scale * rng.uniform(-1.0, 1.0);
  return p;
}

// Random polynomial with small rational coefficients; max_terms monomials of
// total degree <= max_degree.
inline Polynomial<Rational> random_rational_poly(Prng& rng, Dims dims, int max_degree,
                                                 int max_terms) {
  Polynomial<Rational> p(dims);
  const int nterms = 1 + static_cast<int>(rng.next_u64() % max_terms);
  for (int t = 0; t < nterms; ++t) {
    Monomial m(dims.total_coords(), 0);
    int budget = static_cast<int>(rng.next_u64() % (max_degree + 1));
    while (budget > 0) {
      m[rng.next_u64() % dims.total_coords()] += 1;
      --budget;
    }
    const long num = static_cast<long>(rng.next_u64() % 9) - 4;
    const long den = 1 + static_cast<long>(rng.next_u64() % 4);
    p.add_term(m, rational(num, den));
  }
  return p;
}

inline Eigen::MatrixXcd random_hermitian(Prng& rng, int n, double scale = 1.0) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = rng.normal() * scale;
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> z(rng.normal(), rng.normal());
      m(i, j) = z * (scale / 2.0);
      m(j, i) = std::conj(m(i, j));
    }
  }
  return 0.5 * (m + m.adjoint().eval());
}

inline StateVector random_state(Prng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::complex<double>(rng.normal(), rng.normal());
  return StateVector(std::move(v)).normalized();
}

// Random phase-invariant quadratic with exact rational coefficients, built
// from the balanced basis {(X_i^2 + P_i^2)/2, X_iX_j + P_iP_j, X_iP_j - X_jP_i}.
inline Polynomial<Rational> random_balanced_quadratic(Prng& rng, Dims dims) {
  Polynomial<Rational> p(dims);
  auto var = [&](int c) { return Polynomial<Rational>::variable(dims, c); };
  auto coeff = [&] {
    const long num = static_cast<long>(rng.next_u64() % 9) - 4;
    const long den = 1 + static_cast<long>(rng.next_u64() % 3);
    return rational(num, den);
  };
  for (int i = 0; i < dims.n_qm; ++i) {
    const auto xi = var(qm_x(dims, i)), pi = var(qm_p(dims, i));
    p += (xi * xi + pi * pi) * coeff();
    for (int j = i + 1; j < dims.n_qm; ++j) {
      const auto xj = var(qm_x(dims, j)), pj = var(qm_p(dims, j));
      p += (xi * xj + pi * pj) * coeff();
      p += (xi * pj - xj * pi) * coeff();
    }
  }
  return p;
}

// Random classical-sector polynomial (no quantum variables).
inline Polynomial<Rational> random_cl_poly(Prng& rng, Dims dims, int max_degree, int max_terms) {
  Polynomial<Rational> p(dims);
  const int nterms = 1 + static_cast<int>(rng.next_u64() % max_terms);
  for (int t = 0; t < nterms; ++t) {
    Monomial m(dims.total_coords(), 0);
    int budget = static_cast<int>(rng.next_u64() % (max_degree + 1));
    while (budget > 0) {
      m[rng.next_u64() % (2 * dims.n_cl)] += 1;
      --budget;
    }
    const long num = static_cast<long>(rng.next_u64() % 9) - 4;
    const long den = 1 + static_cast<long>(rng.next_u64() % 4);
    p.add_term(m, rational(num, den));
  }
  return p;
}

inline double max_abs_coeff(const Polynomial<double>& p) {
  double m = 0.0;
  for (const auto& [mono, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace hysim::testing
