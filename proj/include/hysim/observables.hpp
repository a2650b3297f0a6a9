#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hysim/phase.hpp"
#include "hysim/polynomial.hpp"

namespace hysim {

// Where an observable lives and how its quantum-sector dependence looks.
//
// The phase classes form a strict chain: every quadratic-form observable is
// almost-classical (invariant under a global phase rotation of all (X_i,P_i)
// pairs), and every almost-classical polynomial is a classical observable in
// the broad sense (any polynomial qualifies).
enum class PhaseClass { QmQuadratic, AlmostClassical, GeneralClassical };

struct ObservableClass {
  bool belongs_cl = false;  // constant with respect to the quantum coordinates
  bool belongs_qm = false;  // constant with respect to the classical coordinates
  PhaseClass phase_class = PhaseClass::GeneralClassical;
  int cl_degree = 0;
  int qm_degree = 0;

  bool hybrid() const { return !belongs_cl && !belongs_qm; }
};

const char* to_string(PhaseClass c);

namespace detail {

// Rewrites the quantum-sector dependence in ladder variables a_i = X_i + iP_i,
// abar_i = X_i - iP_i and reports whether every surviving monomial is
// balanced (equal total degree in a and abar).  Balance is exactly invariance
// under the global phase rotation, decided term by term with no sampling.
template <typename C>
bool is_phase_invariant(const Polynomial<C>& poly, double eps) {
  using Complex = typename CoeffTraits<C>::Complex;
  const Dims d = poly.dims();
  const int ncl2 = 2 * d.n_cl;
  const int nq = d.n_qm;

  // Key: [cl exponents..., a_1, abar_1, ..., a_N, abar_N]
  std::map<Monomial, Complex> ladder;
  std::vector<std::pair<Monomial, Complex>> partial, next;
  for (const auto& [m, c] : poly.terms()) {
    partial.clear();
    Monomial base(ncl2 + 2 * nq, 0);
    for (int k = 0; k < ncl2; ++k) base[k] = m[k];
    partial.emplace_back(std::move(base), Complex(CoeffTraits<C>::make(1, 1, 0, 1) * c));
    for (int i = 0; i < nq; ++i) {
      const int ax = m[ncl2 + 2 * i];      // exponent of X_i
      const int ap = m[ncl2 + 2 * i + 1];  // exponent of P_i
      if (ax == 0 && ap == 0) continue;
      // X^ax = (1/2)^ax (a + abar)^ax ; P^ap = (-i/2)^ap (a - abar)^ap
      Complex prefactor = CoeffTraits<C>::make(1, 1, 0, 1);
      for (int t = 0; t < ax; ++t) prefactor = prefactor * CoeffTraits<C>::make(1, 2, 0, 1);
      for (int t = 0; t < ap; ++t) prefactor = prefactor * CoeffTraits<C>::make(0, 1, -1, 2);
      // binomial tables
      auto binom = [](int n, int r) {
        long b = 1;
        for (int t = 1; t <= r; ++t) b = b * (n - t + 1) / t;
        return b;
      };
      next.clear();
      for (const auto& [pm, pc] : partial) {
        for (int r = 0; r <= ax; ++r) {
          for (int s = 0; s <= ap; ++s) {
            const long sign = ((ap - s) % 2 == 0) ? 1 : -1;
            const long count = binom(ax, r) * binom(ap, s) * sign;
            Complex coeff = pc * prefactor * CoeffTraits<C>::make(count, 1, 0, 1);
            Monomial nm = pm;
            nm[ncl2 + 2 * i] += static_cast<std::uint16_t>(r + s);
            nm[ncl2 + 2 * i + 1] += static_cast<std::uint16_t>(ax - r + ap - s);
            next.emplace_back(std::move(nm), coeff);
          }
        }
      }
      partial.swap(next);
    }
    for (auto& [pm, pc] : partial) {
      auto it = ladder.find(pm);
      if (it == ladder.end()) {
        ladder.emplace(std::move(pm), pc);
      } else {
        it->second += pc;
      }
    }
  }

  for (const auto& [m, c] : ladder) {
    if (CoeffTraits<C>::negligible(c, eps)) continue;
    int da = 0, dabar = 0;
    for (int i = 0; i < nq; ++i) {
      da += m[ncl2 + 2 * i];
      dabar += m[ncl2 + 2 * i + 1];
    }
    if (da != dabar) return false;
  }
  return true;
}

}  // namespace detail

// Sector membership plus the quadratic / almost-classical / general chain.
// On the double-coefficient path, terms with |coeff| <= eps are treated as
// numerically zero; the rational path is exact and ignores eps.
//
// The zero polynomial belongs to both sectors and sits in every class; it is
// reported as QmQuadratic by convention.
template <typename C>
ObservableClass classify(const Polynomial<C>& poly, double eps = 1e-12) {
  const auto p = poly.pruned(eps);
  ObservableClass out;
  out.cl_degree = p.cl_degree();
  out.qm_degree = p.qm_degree();
  out.belongs_cl = out.qm_degree == 0;
  out.belongs_qm = out.cl_degree == 0;
  if (p.is_zero()) {
    out.phase_class = PhaseClass::QmQuadratic;
    return out;
  }
  if (!detail::is_phase_invariant(p, eps)) {
    out.phase_class = PhaseClass::GeneralClassical;
    return out;
  }
  // Strict quadratic-form test: every term purely quadratic in (X,P) with a
  // constant classical coefficient.
  bool strict = true;
  const Dims d = p.dims();
  for (const auto& [m, c] : p.terms()) {
    if (monomial_degree(m, 0, 2 * d.n_cl) != 0 ||
        monomial_degree(m, 2 * d.n_cl, d.total_coords()) != 2) {
      strict = false;
      break;
    }
  }
  out.phase_class = strict ? PhaseClass::QmQuadratic : PhaseClass::AlmostClassical;
  return out;
}

// N x N complex self-adjoint matrix.  Construction symmetrizes the input,
// (M + M^dagger)/2, and rejects matrices whose anti-Hermitian part exceeds
// `tol`; the eigendecomposition is computed once up front.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Eigen::MatrixXcd& m, double tol = 1e-12);

  static HermitianOperator identity(int dim);
  static HermitianOperator diagonal(const std::vector<double>& eigenvalues);
  static HermitianOperator pauli_x();
  static HermitianOperator pauli_y();
  static HermitianOperator pauli_z();

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }

  double expectation(const StateVector& psi) const;

 private:
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// <Psi|G|Psi> as a real polynomial in the oscillator coordinates: the
// expansion of (1/2) sum_ij G_ij (X_i - iP_i)(X_j + iP_j) into real
// monomials.  The polynomial is embedded in a hybrid space with n_cl
// classical pairs (exponents zero there).
Polynomial<double> quadratic_form(const HermitianOperator& op, int n_cl = 0);

// Inverse of quadratic_form: recovers the operator from a polynomial that is
// a pure constant-coefficient quadratic form over the quantum sector.
// Throws InvariantError if the polynomial has no such representation.
HermitianOperator operator_from_quadratic_form(const Polynomial<double>& poly, double tol = 1e-9);

// <psi| (1/i)[F,G] |psi>, the matrix-algebra side of the bracket identity.
double commutator_expectation(const HermitianOperator& f, const HermitianOperator& g,
                              const StateVector& psi);

// One explicit-Euler-style canonical step generated by G:
//   X_i' = X_i + d<G>/dP_i dalpha,  P_i' = P_i - d<G>/dX_i dalpha.
// Agrees with the unitary exp(-iG dalpha) to second order in dalpha.
QuantumPhasePoint infinitesimal_canonical_transform(const QuantumPhasePoint& point,
                                                    const HermitianOperator& g, double dalpha);

}  // namespace hysim
