#include "hysim/observables.hpp"

#include <cmath>

namespace hysim {

const char* to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::QmQuadratic: return "QM_QUADRATIC";
    case PhaseClass::AlmostClassical: return "ALMOST_CLASSICAL";
    case PhaseClass::GeneralClassical: return "GENERAL_CLASSICAL";
  }
  return "?";
}

HermitianOperator::HermitianOperator(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("Hermitian operator must be a nonempty square matrix");
  }
  const Eigen::MatrixXcd anti = m - m.adjoint();
  const double deviation = anti.cwiseAbs().maxCoeff();
  if (deviation > tol) {
    throw InvariantError("matrix is not Hermitian (max |M - M^dagger| = " +
                         std::to_string(deviation) + ")");
  }
  matrix_ = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw InvariantError("eigendecomposition of Hermitian operator failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& eigenvalues) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(eigenvalues.size(), eigenvalues.size());
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) m(i, i) = eigenvalues[i];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::pauli_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::pauli_y() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::pauli_z() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

double HermitianOperator::expectation(const StateVector& psi) const {
  if (psi.dim() != dim()) throw DimensionError("expectation: dimension mismatch");
  const std::complex<double> v = psi.amplitudes().dot(matrix_ * psi.amplitudes());
  return v.real();
}

Polynomial<double> quadratic_form(const HermitianOperator& op, int n_cl) {
  const int n = op.dim();
  const Dims dims{n_cl, n};
  Polynomial<double> out(dims);
  Monomial m(dims.total_coords(), 0);
  auto add = [&](int a, int b, double coeff) {
    if (coeff == 0.0) return;
    std::fill(m.begin(), m.end(), 0);
    m[a] += 1;
    m[b] += 1;
    out.add_term(m, coeff);
  };
  for (int i = 0; i < n; ++i) {
    const double gii = op.matrix()(i, i).real();
    add(qm_x(dims, i), qm_x(dims, i), 0.5 * gii);
    add(qm_p(dims, i), qm_p(dims, i), 0.5 * gii);
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> gij = op.matrix()(i, j);
      // (1/2)[G_ij (X_i - iP_i)(X_j + iP_j) + c.c.]
      add(qm_x(dims, i), qm_x(dims, j), gij.real());
      add(qm_p(dims, i), qm_p(dims, j), gij.real());
      add(qm_x(dims, i), qm_p(dims, j), -gij.imag());
      add(qm_x(dims, j), qm_p(dims, i), gij.imag());
    }
  }
  return out;
}

HermitianOperator operator_from_quadratic_form(const Polynomial<double>& poly, double tol) {
  const Dims d = poly.dims();
  const int n = d.n_qm;
  if (n < 1) throw InvariantError("polynomial has no quantum sector");
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  // Each off-diagonal entry is determined twice (XX vs PP, X_iP_j vs X_jP_i);
  // collect both determinations and check they agree.
  Eigen::MatrixXd re_xx = Eigen::MatrixXd::Zero(n, n), re_pp = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd im_a = Eigen::MatrixXd::Zero(n, n), im_b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [m, c] : poly.terms()) {
    if (monomial_degree(m, 0, 2 * d.n_cl) != 0) {
      throw InvariantError("quadratic form must have constant classical coefficients");
    }
    int v1 = -1, v2 = -1;
    for (int q = 2 * d.n_cl; q < d.total_coords(); ++q) {
      for (int e = 0; e < m[q]; ++e) {
        if (v1 < 0) {
          v1 = q;
        } else if (v2 < 0) {
          v2 = q;
        } else {
          throw InvariantError("polynomial degree exceeds 2 in the quantum sector");
        }
      }
    }
    if (v2 < 0) throw InvariantError("quadratic form must be purely quadratic in (X,P)");
    const int q1 = v1 - 2 * d.n_cl, q2 = v2 - 2 * d.n_cl;
    const int i = q1 / 2, j = q2 / 2;
    const bool p1 = q1 % 2, p2 = q2 % 2;
    if (i == j) {
      if (p1 != p2) throw InvariantError("X_i P_i term has no quadratic-form representation");
      (p1 ? re_pp : re_xx)(i, i) = 2.0 * c;
    } else if (!p1 && !p2) {
      re_xx(i, j) = c;
    } else if (p1 && p2) {
      re_pp(i, j) = c;
    } else {
      // one X, one P; orientation decides the sign of Im G_ij
      const int xi = p1 ? j : i;  // mode carrying the X factor
      const int pj = p1 ? i : j;  // mode carrying the P factor
      if (xi < pj) {
        im_a(xi, pj) = -c;  // X_i P_j term carries -Im G_ij
      } else {
        im_b(pj, xi) = c;  // X_j P_i term carries +Im G_ij
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(re_xx(i, i) - re_pp(i, i)) > tol) {
      throw InvariantError("inconsistent X_i^2 / P_i^2 coefficients");
    }
    g(i, i) = 0.5 * (re_xx(i, i) + re_pp(i, i));
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(re_xx(i, j) - re_pp(i, j)) > tol) {
        throw InvariantError("inconsistent X_iX_j / P_iP_j coefficients");
      }
      if (std::abs(im_a(i, j) - im_b(i, j)) > tol) {
        throw InvariantError("inconsistent X_iP_j / X_jP_i coefficients");
      }
      const double re = 0.5 * (re_xx(i, j) + re_pp(i, j));
      const double im = 0.5 * (im_a(i, j) + im_b(i, j));
      g(i, j) = std::complex<double>(re, im);
      g(j, i) = std::complex<double>(re, -im);
    }
  }
  HermitianOperator op(g, 1e-9);
  // Round-trip check: the reconstruction must reproduce the polynomial.
  Polynomial<double> back = quadratic_form(op, d.n_cl);
  Polynomial<double> diff = back - poly;
  for (const auto& [m, c] : diff.terms()) {
    if (std::abs(c) > tol) {
      throw InvariantError("polynomial is not the quadratic form of any Hermitian operator");
    }
  }
  return op;
}

double commutator_expectation(const HermitianOperator& f, const HermitianOperator& g,
                              const StateVector& psi) {
  if (f.dim() != g.dim() || f.dim() != psi.dim()) {
    throw DimensionError("commutator expectation: dimension mismatch");
  }
  const Eigen::MatrixXcd comm = f.matrix() * g.matrix() - g.matrix() * f.matrix();
  const std::complex<double> v = psi.amplitudes().dot(comm * psi.amplitudes());
  // (1/i)[F,G] is Hermitian; its expectation is v/i = v.imag() for v = <[F,G]>.
  return v.imag();
}

QuantumPhasePoint infinitesimal_canonical_transform(const QuantumPhasePoint& point,
                                                    const HermitianOperator& g, double dalpha) {
  if (g.dim() != point.n_modes) {
    throw DimensionError("canonical transform: operator/point dimension mismatch");
  }
  const Dims dims{0, point.n_modes};
  const Polynomial<double> form = quadratic_form(g);
  std::vector<double> out = point.coords;
  for (int i = 0; i < point.n_modes; ++i) {
    const double dgdx = form.derivative(qm_x(dims, i)).eval(point.coords);
    const double dgdp = form.derivative(qm_p(dims, i)).eval(point.coords);
    out[2 * i] += dgdp * dalpha;
    out[2 * i + 1] -= dgdx * dalpha;
  }
  return QuantumPhasePoint(point.n_modes, std::move(out));
}

}  // namespace hysim
