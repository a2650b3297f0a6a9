#include "hysim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hysim {

namespace {
// Substream tags; part of the reproducibility contract.
constexpr std::uint64_t kTagClassical = 1;
constexpr std::uint64_t kTagComponent = 2;
constexpr std::uint64_t kTagPhase = 3;
}  // namespace

DensityOperator::DensityOperator(std::vector<double> w, std::vector<StateVector> states)
    : weights(std::move(w)), eigenstates(std::move(states)) {
  if (weights.empty() || weights.size() != eigenstates.size()) {
    throw DimensionError("density operator needs matching weights and eigenstates");
  }
  double sum = 0.0;
  for (double x : weights) {
    if (x < 0.0 || x > 1.0) throw InvariantError("density operator weights must lie in [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvariantError("density operator weights must sum to 1");
  }
  const int d = eigenstates.front().dim();
  for (std::size_t i = 0; i < eigenstates.size(); ++i) {
    if (eigenstates[i].dim() != d) throw DimensionError("density operator eigenstate dimensions differ");
    for (std::size_t j = 0; j <= i; ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(std::abs(eigenstates[i].inner(eigenstates[j])) - target) > 1e-12) {
        throw InvariantError("density operator eigenstates must be orthonormal");
      }
    }
  }
}

DensityOperator DensityOperator::pure(StateVector psi) {
  std::vector<StateVector> states{psi.normalized()};
  return DensityOperator({1.0}, std::move(states));
}

ClassicalDistribution ClassicalDistribution::gaussian(Eigen::VectorXd mean,
                                                      Eigen::MatrixXd covariance) {
  ClassicalDistribution d;
  d.kind_ = Kind::Gaussian;
  if (mean.size() % 2 != 0 || mean.size() == 0) {
    throw DimensionError("gaussian mean must have 2n entries");
  }
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw DimensionError("gaussian covariance shape mismatch");
  }
  if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
    throw InvariantError("gaussian covariance must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw InvariantError("gaussian covariance must be positive definite");
  }
  d.n_dof_ = static_cast<int>(mean.size()) / 2;
  d.mean_ = std::move(mean);
  d.chol_ = llt.matrixL();
  return d;
}

ClassicalDistribution ClassicalDistribution::delta(std::vector<double> point) {
  ClassicalDistribution d;
  d.kind_ = Kind::Delta;
  if (point.empty() || point.size() % 2 != 0) {
    throw DimensionError("delta point must have 2n entries");
  }
  d.n_dof_ = static_cast<int>(point.size()) / 2;
  d.lo_ = std::move(point);
  return d;
}

ClassicalDistribution ClassicalDistribution::uniform(std::vector<double> lo,
                                                     std::vector<double> hi) {
  ClassicalDistribution d;
  d.kind_ = Kind::Uniform;
  if (lo.empty() || lo.size() != hi.size() || lo.size() % 2 != 0) {
    throw DimensionError("uniform box needs matching 2n bounds");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw InvariantError("uniform box has lo > hi");
  }
  d.n_dof_ = static_cast<int>(lo.size()) / 2;
  d.lo_ = std::move(lo);
  d.hi_ = std::move(hi);
  return d;
}

std::vector<double> ClassicalDistribution::sample(Prng& rng) const {
  const int m = 2 * n_dof_;
  std::vector<double> out(m);
  switch (kind_) {
    case Kind::Delta:
      out = lo_;
      break;
    case Kind::Uniform:
      for (int i = 0; i < m; ++i) out[i] = rng.uniform(lo_[i], hi_[i]);
      break;
    case Kind::Gaussian: {
      Eigen::VectorXd z(m);
      for (int i = 0; i < m; ++i) z(i) = rng.normal();
      Eigen::VectorXd v = mean_ + chol_ * z;
      for (int i = 0; i < m; ++i) out[i] = v(i);
      break;
    }
  }
  return out;
}

HybridEnsemble sample_factorized(const ClassicalDistribution& cl_dist,
                                 const DensityOperator& rho_qm, int count, std::uint64_t seed,
                                 std::optional<std::uint64_t> phase_seed) {
  if (count < 1) throw InvariantError("ensemble needs at least one particle");
  const std::uint64_t pseed = phase_seed.value_or(seed ^ 0x517cc1b727220a95ull);

  HybridEnsemble ens;
  ens.dims = Dims{cl_dist.n_dof(), rho_qm.dim()};
  ens.seed = seed;
  ens.phase_seed = pseed;
  ens.particles.reserve(count);
  ens.weights.assign(count, 1.0 / count);
  ens.component.resize(count);

  // cumulative weights for component selection
  std::vector<double> cum(rho_qm.weights.size());
  std::partial_sum(rho_qm.weights.begin(), rho_qm.weights.end(), cum.begin());
  cum.back() = 1.0;

  for (int i = 0; i < count; ++i) {
    Prng cl_rng = substream(seed, kTagClassical, i);
    Prng comp_rng = substream(seed, kTagComponent, i);
    Prng phase_rng = substream(pseed, kTagPhase, i);

    std::vector<double> cl = cl_dist.sample(cl_rng);
    const double u = comp_rng.uniform01();
    const int j = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    const double theta = phase_rng.uniform(0.0, 6.283185307179586476925286766559);

    QuantumPhasePoint qp = phase_rotate(expand_state(rho_qm.eigenstates[j].normalized()), theta);
    ens.particles.push_back(
        HybridPhasePoint{ClassicalPhasePoint(cl_dist.n_dof(), std::move(cl)), std::move(qp)});
    ens.component[i] = j;
  }
  return ens;
}

HybridEnsemble liouville_propagate(const HybridEnsemble& ens, const HybridHamiltonian& h,
                                   double t0, double t1, const IntegratorConfig& cfg) {
  require_same_dims(ens.dims, h.dims(), "liouville_propagate");
  HybridEnsemble out = ens;
  Propagator prop(h, cfg);
  std::ostringstream failures;
  int n_failures = 0;
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    try {
      out.particles[i] = prop.endpoint(ens.particles[i], t0, t1);
      if (n_failures < 8) failures << " [particle " << i << ": " << e.what() << "]";
      ++n_failures;
    }
  }
  if (n_failures > 0) {
    throw StepError("liouville propagation failed for " + std::to_string(n_failures) +
                        " particle(s):" + failures.str(),
                    0.0);
  }
  return out;
}

double Marginal::total_mass() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

Marginal marginal(const HybridEnsemble& ens, int coord, std::vector<double> edges) {
  if (ens.particles.empty()) throw InvariantError("marginal of an empty ensemble");
  if (coord < 0 || coord >= ens.dims.total_coords()) {
    throw DimensionError("marginal coordinate out of range");
  }
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvariantError("marginal bin edges must be strictly increasing");
  }
  Marginal m;
  m.coord = coord;
  m.edges = std::move(edges);
  m.masses.assign(m.edges.size() - 1, 0.0);
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    const std::vector<double> flat = ens.particles[i].flat();
    const double v = flat[coord];
    if (v < m.edges.front() || v >= m.edges.back()) {
      m.out_of_range += ens.weights[i];
      continue;
    }
    const std::size_t bin =
        std::upper_bound(m.edges.begin(), m.edges.end(), v) - m.edges.begin() - 1;
    m.masses[bin] += ens.weights[i];
  }
  return m;
}

std::vector<double> linear_edges(double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw InvariantError("bad histogram range");
  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
  return edges;
}

double ensemble_expectation(const HybridEnsemble& ens, const Polynomial<double>& obs) {
  require_same_dims(ens.dims, obs.dims(), "ensemble_expectation");
  CompiledPoly c(obs);
  double sum = 0.0;
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    sum += ens.weights[i] * c.eval(ens.particles[i].flat());
  }
  return sum;
}

std::pair<double, double> coordinate_moments(const HybridEnsemble& ens, int coord) {
  if (coord < 0 || coord >= ens.dims.total_coords()) {
    throw DimensionError("moment coordinate out of range");
  }
  double mean = 0.0, wsum = 0.0;
  std::vector<double> vals(ens.particles.size());
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    vals[i] = ens.particles[i].flat()[coord];
    mean += ens.weights[i] * vals[i];
    wsum += ens.weights[i];
  }
  mean /= wsum;
  double var = 0.0;
  for (std::size_t i = 0; i < ens.particles.size(); ++i) {
    var += ens.weights[i] * (vals[i] - mean) * (vals[i] - mean);
  }
  return {mean, var / wsum};
}

}  // namespace hysim
