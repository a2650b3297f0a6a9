#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "hysim/coords.hpp"
#include "hysim/errors.hpp"

namespace hysim {

// Hilbert-space vector with complex amplitudes (hbar = 1 model units).
class StateVector {
 public:
  explicit StateVector(Eigen::VectorXcd amplitudes);
  StateVector(std::initializer_list<std::complex<double>> amplitudes);

  static StateVector basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::complex<double> amplitude(int i) const { return amplitudes_(i); }

  double squared_norm() const { return amplitudes_.squaredNorm(); }
  // Explicit rescale to unit norm; throws on the zero vector.
  StateVector normalized() const;
  std::complex<double> inner(const StateVector& other) const;

 private:
  Eigen::VectorXcd amplitudes_;
};

// Oscillator-representation point: N quantum modes stored interleaved as
// (X_1, P_1, ..., X_N, P_N).  Points of normalized states live on the sphere
// sum_i (X_i^2 + P_i^2) = 2.
struct QuantumPhasePoint {
  int n_modes = 0;
  std::vector<double> coords;

  QuantumPhasePoint(int modes, std::vector<double> xp);
  double x(int i) const { return coords[2 * i]; }
  double p(int i) const { return coords[2 * i + 1]; }
};

struct ClassicalPhasePoint {
  int n_dof = 0;
  std::vector<double> coords;  // (x_1, p_1, ..., x_n, p_n)

  ClassicalPhasePoint(int dof, std::vector<double> xp);
  double x(int k) const { return coords[2 * k]; }
  double p(int k) const { return coords[2 * k + 1]; }
};

struct HybridPhasePoint {
  ClassicalPhasePoint cl;
  QuantumPhasePoint qm;

  Dims dims() const { return Dims{cl.n_dof, qm.n_modes}; }
  std::vector<double> flat() const;
  static HybridPhasePoint from_flat(Dims dims, std::span<const double> coords);
};

// Oscillator expansion of a state vector: X_i + iP_i = sqrt(2) amplitude_i.
QuantumPhasePoint expand_state(const StateVector& psi);

// Inverse map: amplitude_i = (X_i + iP_i)/sqrt(2).
StateVector contract_state(const QuantumPhasePoint& point);

// Constraint value C = (1/2) sum_i (X_i^2 + P_i^2); equals <psi|psi>.
double norm_constraint(const QuantumPhasePoint& point);

// Rotates every (X_i, P_i) pair by the same angle theta.  Sign convention:
// the contracted amplitudes pick up the factor e^{+i theta}.
QuantumPhasePoint phase_rotate(const QuantumPhasePoint& point, double theta);

// Distance between the rays of two states: the minimum over a global phase
// of the Euclidean distance, min_theta |psi - e^{i theta} phi|.  In closed
// form that is sqrt(|psi|^2 + |phi|^2 - 2|<psi|phi>|).
double ray_distance(const StateVector& a, const StateVector& b);
double ray_distance(const QuantumPhasePoint& a, const QuantumPhasePoint& b);

}  // namespace hysim
