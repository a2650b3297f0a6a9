#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "hysim/observables.hpp"
#include "hysim/phase.hpp"
#include "hysim/polynomial.hpp"

namespace hysim {

// Piecewise-constant scalar schedule for the interaction coupling g(t).
// value(t) = v_k on [b_k, b_{k+1}); before the first breakpoint the first
// value applies, after the last the final value holds.
class Schedule {
 public:
  static Schedule constant(double value) { return Schedule({}, {value}); }
  // baseline outside [t_on, t_off), amplitude inside.
  static Schedule pulse(double t_on, double t_off, double amplitude, double baseline = 0.0);

  Schedule(std::vector<double> breakpoints, std::vector<double> values);
  double value(double t) const;
  bool is_constant() const { return breakpoints_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Flattened evaluator for a double polynomial; term-sparse variable lists
// keep gradient evaluation inside the integrator loop away from map lookups.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Polynomial<double>& p);
  double eval(std::span<const double> coords) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, int>> powers;  // (coordinate, exponent)
  };
  std::vector<Term> terms_;
};

// H_total = H_cl(x,p) + <H_qm>(X,P) + g(t) * interaction(x,p;X,P).
//
// Validation at construction: h_cl must not touch quantum coordinates, the
// interaction must be phase invariant in its (X,P) dependence (otherwise the
// total is not an observable and the constraint sphere would not be
// preserved).  Partial derivatives of the base and interaction parts are
// derived symbolically once and compiled for evaluation.
class HybridHamiltonian {
 public:
  HybridHamiltonian(Dims dims, Polynomial<double> h_cl, HermitianOperator h_qm,
                    Polynomial<double> interaction, Schedule g = Schedule::constant(1.0));

  Dims dims() const { return dims_; }
  const Polynomial<double>& h_cl() const { return h_cl_; }
  const HermitianOperator& h_qm() const { return h_qm_; }
  const Polynomial<double>& interaction() const { return interaction_; }
  const Schedule& coupling() const { return g_; }
  bool time_independent() const { return g_.is_constant(); }

  Polynomial<double> total(double t) const;
  double energy(std::span<const double> coords, double t) const;
  // dH/dcoord for every flat coordinate, written into `out`.
  void gradient(std::span<const double> coords, double t, std::span<double> out) const;

 private:
  Dims dims_;
  Polynomial<double> h_cl_;
  HermitianOperator h_qm_;
  Polynomial<double> interaction_;
  Schedule g_;
  Polynomial<double> base_;  // h_cl + quadratic_form(h_qm)
  CompiledPoly base_energy_, inter_energy_;
  std::vector<CompiledPoly> base_grad_, inter_grad_;
};

enum class Scheme { ImplicitMidpoint, LeapfrogSplit };

struct IntegratorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double fixed_point_tol = 1e-13;
  int max_fixed_point_iters = 50;
  // Trajectory recording stride; endpoints are always recorded.
  int record_every = 1;
};

struct Trajectory {
  Dims dims;
  std::vector<double> times;
  std::vector<HybridPhasePoint> points;
  std::vector<double> energy;
  std::vector<double> constraint;

  double energy_drift() const;
  double constraint_drift() const;  // max |C - C(0)|
};

// Splitting integrator backend.  The Hamiltonian is decomposed into parts
// with exact flows:
//   - quantum part: the cached unitary of h_qm;
//   - classical part: exact affine symplectic flow when h_cl is quadratic,
//     else a kick/drift substep when h_cl(x,p) = T(p) + V(x) is separable;
//   - interaction: exact flow for c(x,p) * Q(X,P) with c affine and Q a
//     quadratic form (both c and Q are conserved by it, so the characteristic
//     is available in closed form).
// Construction throws InvariantError when the structure does not fit.
class SplitFlow {
 public:
  explicit SplitFlow(const HybridHamiltonian& h);
  // Strang composition over one step of length dt at time t.
  void step(std::vector<double>& coords, double t, double dt) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Reusable stepping driver bound to one Hamiltonian and one config.  Holds
// the split decomposition and fixed-point work buffers so ensemble advection
// can reuse them across particles.  Keeps a reference to the Hamiltonian;
// not thread-safe - use one instance per thread.
class Propagator {
 public:
  Propagator(const HybridHamiltonian& h, const IntegratorConfig& cfg);

  void step(std::vector<double>& coords, double t, double dt);
  HybridPhasePoint endpoint(const HybridPhasePoint& point, double t0, double t1);
  Trajectory run(const HybridPhasePoint& point, double t0, double t1);

 private:
  const HybridHamiltonian& h_;
  IntegratorConfig cfg_;
  std::optional<SplitFlow> split_;
  std::vector<double> z1_, y_, grad_;
};

// One symplectic step of Hamilton's equations for H at time t.
HybridPhasePoint flow_step(const HybridPhasePoint& point, const HybridHamiltonian& h, double t,
                           const IntegratorConfig& cfg);

Trajectory propagate(const HybridPhasePoint& point, const HybridHamiltonian& h, double t0,
                     double t1, const IntegratorConfig& cfg);

// Endpoint-only variant used for ensemble advection (no recording).
HybridPhasePoint propagate_endpoint(const HybridPhasePoint& point, const HybridHamiltonian& h,
                                    double t0, double t1, const IntegratorConfig& cfg);

// Independent propagation oracle: psi(t) = sum_j e^{-iE_j t} |phi_j><phi_j|psi>.
// Uses the operator's eigendecomposition; shares no code with the integrator.
StateVector schrodinger_oracle(const StateVector& psi, const HermitianOperator& hq, double t);

// Expectation time series along a trajectory, one row per operator.
std::vector<std::vector<double>> ehrenfest_means(const Trajectory& traj,
                                                 const std::vector<HermitianOperator>& ops);

}  // namespace hysim
