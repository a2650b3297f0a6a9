#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hysim/dynamics.hpp"
#include "hysim/ensemble.hpp"
#include "hysim/expression.hpp"

#include "json.hpp"

namespace hysim {

constexpr std::uint64_t kDefaultSeed = 1234567891ull;

// One measured quantity paired with its comparator and tolerance.
struct CheckRow {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  nlohmann::json inputs;
  std::vector<CheckRow> checks;
  nlohmann::json quantities;  // extra measured values without pass/fail semantics
  std::vector<std::string> notes;

  void add_check(const std::string& name, double measured, double tolerance,
                 const std::string& detail = "");
  void add_note(std::string note) { notes.push_back(std::move(note)); }
  bool passed() const;
  nlohmann::json to_json() const;
};

// ---------------------------------------------------------------------------
// Pointer measurement model: a two-state quantum object coupled to one
// classical degree of freedom through g(t) p <sigma_z>, pulsed over [0, T]
// with time-integrated coupling f = g T.  In the idealized mode the free
// parts are switched off during the pulse and the exact characteristic
//   x -> x + f <sigma_z>,  p fixed,  (X,P) rotated mode-wise by -/+ f p
// is available per particle as an independent comparator.

struct ToyModelConfig {
  double f = 5.0;
  double pulse_duration = 1.0;  // T; the pulse amplitude is g = f / T
  double w_plus = 0.3;
  double w_minus = 0.7;
  double x0 = 0.0;
  double p0 = 0.0;
  double sigma_x = 0.5;
  double sigma_p = 0.5;
  int count = 100000;
  int steps = 100;  // pulse resolution
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> phase_seed;
  Scheme scheme = Scheme::LeapfrogSplit;
  // Non-idealized mode: H_cl = p^2 / (2 mass), H_qm = (omega_qm/2) sigma_x.
  bool idealized = true;
  double mass = 1.0;
  double omega_qm = 0.1;
  int bins = 201;

  double pulse_amplitude() const { return f / pulse_duration; }
  void validate() const;
};

struct ToyModelResult {
  ScenarioReport report;
  HybridEnsemble initial;
  HybridEnsemble final_state;
  HybridEnsemble closed_form;  // same particles advanced by the exact map
  Marginal x_marginal;
  double max_endpoint_deviation = 0.0;  // integrator vs closed form, all coords
};

ToyModelResult run_toy_measurement(const ToyModelConfig& cfg);

// ---------------------------------------------------------------------------
// Bilinearly coupled classical and (truncated) quantum oscillators.  The
// expectation values (x, p, <Q>, <P>) obey a closed linear system whose
// solution is the benchmark: the quantum means must follow the classical
// equations of motion.  Truncation is monitored via the top-level occupation.

struct PeresTernoConfig {
  double mass = 1.0;
  double omega_cl = 1.0;
  double omega_qm = 1.0;
  double lambda = 0.1;
  int n_levels = 20;
  double alpha_re = 0.5;  // coherent-state displacement of the quantum mode
  double alpha_im = 0.0;
  double x0 = 1.0;
  double p0 = 0.0;
  double t_max = 0.0;  // 0: one beat period (4 pi carrier periods when lambda = 0)
  double dt = 2e-4;
  int record_every = 100;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double fixed_point_tol = 1e-14;
  // Optional ensemble leg.
  int count = 0;
  double ensemble_sigma = 0.05;
  double ensemble_t = 6.283185307179586;
  double ensemble_dt = 1e-3;
  std::uint64_t seed = kDefaultSeed;
  double occupation_threshold = 1e-6;
  double tracking_tol = 0.0;  // 0: 1e-8 for lambda == 0, else 1e-6
  double sector_tol = 1e-8;   // lambda == 0 closed-form match

  void validate() const;
  double beat_period() const;
  double effective_t_max() const;
  double effective_tracking_tol() const;
};

struct PeresTernoResult {
  ScenarioReport report;
  Trajectory trajectory;
  // Rows: recorded time, measured (x,p,q,pi), reference (x,p,q,pi).
  std::vector<double> times;
  std::vector<std::array<double, 4>> measured;
  std::vector<std::array<double, 4>> reference;
  double max_tracking_error = 0.0;
  double max_top_occupation = 0.0;
  bool truncation_limited = false;
};

PeresTernoResult run_peres_terno(const PeresTernoConfig& cfg);

// Closed-form solution of the coupled mean system, exposed for tests:
// returns (x, p, q, pi) at time t for the given parameters.
std::array<double, 4> coupled_oscillator_reference(const PeresTernoConfig& cfg,
                                                   const std::array<double, 4>& u0, double t);

// ---------------------------------------------------------------------------
// Closure probe: nested hybrid brackets of two observables, classifying
// every level and reporting whether any iterate escapes the phase-invariant
// (balanced) set.

struct ClosureProbeConfig {
  int depth = 3;
  std::size_t max_terms = 200000;  // per-polynomial budget
  int max_degree = 64;
};

struct ClosureLevelRow {
  int level = 0;
  std::size_t results = 0;  // nonzero bracket results at this level
  int max_qm_degree = 0;
  int max_cl_degree = 0;
  std::size_t max_terms = 0;
  std::size_t escapes = 0;  // results that are not phase invariant
};

struct ClosureProbeResult {
  ScenarioReport report;
  std::vector<ClosureLevelRow> levels;
  bool budget_exceeded = false;
  std::size_t total_escapes = 0;
};

ClosureProbeResult run_closure_probe(const Polynomial<Rational>& a, const Polynomial<Rational>& b,
                                     const ClosureProbeConfig& cfg);

}  // namespace hysim
