#include "hysim/phase.hpp"

#include <cmath>

namespace hysim {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

void require_finite(const std::vector<double>& v, const char* what) {
  for (double c : v) {
    if (!std::isfinite(c)) throw InvariantError(std::string(what) + ": non-finite coordinate");
  }
}
}  // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DimensionError("state vector needs at least one amplitude");
}

StateVector::StateVector(std::initializer_list<std::complex<double>> amplitudes)
    : amplitudes_(static_cast<Eigen::Index>(amplitudes.size())) {
  if (amplitudes.size() == 0) throw DimensionError("state vector needs at least one amplitude");
  Eigen::Index i = 0;
  for (const auto& a : amplitudes) amplitudes_(i++) = a;
}

StateVector StateVector::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) throw DimensionError("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::normalized() const {
  const double n = std::sqrt(squared_norm());
  if (n == 0.0) throw InvariantError("cannot normalize the zero state vector");
  return StateVector(Eigen::VectorXcd(amplitudes_ / n));
}

std::complex<double> StateVector::inner(const StateVector& other) const {
  if (dim() != other.dim()) throw DimensionError("inner product: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

QuantumPhasePoint::QuantumPhasePoint(int modes, std::vector<double> xp)
    : n_modes(modes), coords(std::move(xp)) {
  if (modes < 1) throw DimensionError("quantum phase point needs at least one mode");
  if (static_cast<int>(coords.size()) != 2 * modes) {
    throw DimensionError("quantum phase point needs 2N coordinates");
  }
  require_finite(coords, "quantum phase point");
}

ClassicalPhasePoint::ClassicalPhasePoint(int dof, std::vector<double> xp)
    : n_dof(dof), coords(std::move(xp)) {
  if (dof < 1) throw DimensionError("classical phase point needs at least one degree of freedom");
  if (static_cast<int>(coords.size()) != 2 * dof) {
    throw DimensionError("classical phase point needs 2n coordinates");
  }
  require_finite(coords, "classical phase point");
}

std::vector<double> HybridPhasePoint::flat() const {
  std::vector<double> out;
  out.reserve(cl.coords.size() + qm.coords.size());
  out.insert(out.end(), cl.coords.begin(), cl.coords.end());
  out.insert(out.end(), qm.coords.begin(), qm.coords.end());
  return out;
}

HybridPhasePoint HybridPhasePoint::from_flat(Dims dims, std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != dims.total_coords()) {
    throw DimensionError("flat coordinate array has wrong length");
  }
  std::vector<double> cl(coords.begin(), coords.begin() + 2 * dims.n_cl);
  std::vector<double> qm(coords.begin() + 2 * dims.n_cl, coords.end());
  return HybridPhasePoint{ClassicalPhasePoint(dims.n_cl, std::move(cl)),
                          QuantumPhasePoint(dims.n_qm, std::move(qm))};
}

QuantumPhasePoint expand_state(const StateVector& psi) {
  std::vector<double> xp(2 * psi.dim());
  for (int i = 0; i < psi.dim(); ++i) {
    xp[2 * i] = kSqrt2 * psi.amplitude(i).real();
    xp[2 * i + 1] = kSqrt2 * psi.amplitude(i).imag();
  }
  return QuantumPhasePoint(psi.dim(), std::move(xp));
}

StateVector contract_state(const QuantumPhasePoint& point) {
  Eigen::VectorXcd amps(point.n_modes);
  for (int i = 0; i < point.n_modes; ++i) {
    amps(i) = std::complex<double>(point.x(i), point.p(i)) / kSqrt2;
  }
  return StateVector(std::move(amps));
}

double norm_constraint(const QuantumPhasePoint& point) {
  double sum = 0.0;
  for (double c : point.coords) sum += c * c;
  return 0.5 * sum;
}

QuantumPhasePoint phase_rotate(const QuantumPhasePoint& point, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<double> xp(point.coords.size());
  for (int i = 0; i < point.n_modes; ++i) {
    xp[2 * i] = c * point.x(i) - s * point.p(i);
    xp[2 * i + 1] = s * point.x(i) + c * point.p(i);
  }
  return QuantumPhasePoint(point.n_modes, std::move(xp));
}

double ray_distance(const StateVector& a, const StateVector& b) {
  const double d2 = a.squared_norm() + b.squared_norm() - 2.0 * std::abs(a.inner(b));
  return std::sqrt(std::max(0.0, d2));
}

double ray_distance(const QuantumPhasePoint& a, const QuantumPhasePoint& b) {
  return ray_distance(contract_state(a), contract_state(b));
}

}  // namespace hysim
