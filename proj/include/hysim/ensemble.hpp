#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "hysim/dynamics.hpp"
#include "hysim/phase.hpp"
#include "hysim/polynomial.hpp"
#include "hysim/rng.hpp"

namespace hysim {

// Mixed quantum state rho = sum_j w_j |j><j| given by its eigen-ensemble:
// non-negative weights summing to one and pairwise-orthonormal eigenstates.
struct DensityOperator {
  std::vector<double> weights;
  std::vector<StateVector> eigenstates;

  DensityOperator(std::vector<double> w, std::vector<StateVector> states);
  static DensityOperator pure(StateVector psi);
  int dim() const { return eigenstates.front().dim(); }
};

// Initial classical distribution over the 2n interleaved (x,p) coordinates.
class ClassicalDistribution {
 public:
  static ClassicalDistribution gaussian(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
  static ClassicalDistribution delta(std::vector<double> point);
  static ClassicalDistribution uniform(std::vector<double> lo, std::vector<double> hi);

  int n_dof() const { return n_dof_; }
  std::vector<double> sample(Prng& rng) const;

 private:
  enum class Kind { Gaussian, Delta, Uniform };
  Kind kind_;
  int n_dof_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd chol_;  // lower Cholesky factor of the covariance
  std::vector<double> lo_, hi_;
};

// Weighted particle set representing the hybrid density.  Weights are fixed
// at sampling time and never touched by propagation: the density is constant
// along Hamiltonian characteristics, so transport moves points only.
struct HybridEnsemble {
  Dims dims;
  std::vector<HybridPhasePoint> particles;
  std::vector<double> weights;
  std::vector<int> component;  // density-operator eigenstate index per particle
  std::uint64_t seed = 0;
  std::uint64_t phase_seed = 0;

  std::size_t size() const { return particles.size(); }
};

// Draws `count` particles from the factorized density clDist x rho_qm:
// classical coordinates from clDist, the quantum point by selecting an
// eigenstate with probability w_j, applying a uniformly random global phase
// and expanding to oscillator coordinates.  Weights are uniform 1/count.
//
// Each particle consumes its own substreams of (seed, index); the global
// phase draws come from phase_seed so they can be re-randomized without
// disturbing anything else (all reported physics must be invariant).
HybridEnsemble sample_factorized(const ClassicalDistribution& cl_dist,
                                 const DensityOperator& rho_qm, int count, std::uint64_t seed,
                                 std::optional<std::uint64_t> phase_seed = std::nullopt);

// Advects every particle along the Hamiltonian flow (method of
// characteristics for the Liouville equation).  Weights and component labels
// are carried over unchanged.  Integrator failures are collected and
// reported with particle indices.
HybridEnsemble liouville_propagate(const HybridEnsemble& ens, const HybridHamiltonian& h,
                                   double t0, double t1, const IntegratorConfig& cfg);

struct Marginal {
  int coord = 0;
  std::vector<double> edges;   // strictly increasing, size = bins + 1
  std::vector<double> masses;  // size = bins
  double out_of_range = 0.0;

  double total_mass() const;
};

// Weighted histogram of one flat coordinate (see coords.hpp for indexing).
Marginal marginal(const HybridEnsemble& ens, int coord, std::vector<double> edges);

std::vector<double> linear_edges(double lo, double hi, int bins);

// sum_particles weight * obs(point).
double ensemble_expectation(const HybridEnsemble& ens, const Polynomial<double>& obs);

// Weighted mean and variance of one flat coordinate.
std::pair<double, double> coordinate_moments(const HybridEnsemble& ens, int coord);

}  // namespace hysim
