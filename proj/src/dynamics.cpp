#include "hysim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <unsupported/Eigen/MatrixFunctions>

namespace hysim {

// ---------------------------------------------------------------------------
// Schedule

Schedule::Schedule(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw InvariantError("schedule needs one more value than breakpoints");
  }
  if (!std::is_sorted(breakpoints_.begin(), breakpoints_.end())) {
    throw InvariantError("schedule breakpoints must be sorted");
  }
}

Schedule Schedule::pulse(double t_on, double t_off, double amplitude, double baseline) {
  if (!(t_off > t_on)) throw InvariantError("pulse needs t_off > t_on");
  return Schedule({t_on, t_off}, {baseline, amplitude, baseline});
}

double Schedule::value(double t) const {
  std::size_t k = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                  breakpoints_.begin();
  return values_[k];
}

// ---------------------------------------------------------------------------
// CompiledPoly

CompiledPoly::CompiledPoly(const Polynomial<double>& p) {
  for (const auto& [m, c] : p.terms()) {
    Term t;
    t.coeff = c;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] > 0) t.powers.emplace_back(static_cast<int>(v), int(m[v]));
    }
    terms_.push_back(std::move(t));
  }
}

double CompiledPoly::eval(std::span<const double> coords) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (const auto& [var, exp] : t.powers) {
      const double c = coords[var];
      for (int e = 0; e < exp; ++e) v *= c;
    }
    sum += v;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// HybridHamiltonian

HybridHamiltonian::HybridHamiltonian(Dims dims, Polynomial<double> h_cl, HermitianOperator h_qm,
                                     Polynomial<double> interaction, Schedule g)
    : dims_(dims),
      h_cl_(std::move(h_cl)),
      h_qm_(std::move(h_qm)),
      interaction_(std::move(interaction)),
      g_(std::move(g)),
      base_(dims) {
  require_same_dims(dims_, h_cl_.dims(), "hamiltonian classical part");
  require_same_dims(dims_, interaction_.dims(), "hamiltonian interaction");
  if (h_qm_.dim() != dims_.n_qm) {
    throw DimensionError("hamiltonian quantum operator dimension mismatch");
  }
  if (h_cl_.qm_degree() != 0) {
    throw InvariantError("classical Hamiltonian part must not involve quantum coordinates");
  }
  const auto icls = classify(interaction_);
  if (icls.phase_class == PhaseClass::GeneralClassical) {
    throw InvariantError(
        "interaction is not phase invariant in (X,P); the total energy would not be an "
        "observable");
  }
  base_ = h_cl_ + quadratic_form(h_qm_, dims_.n_cl);
  base_energy_ = CompiledPoly(base_);
  inter_energy_ = CompiledPoly(interaction_);
  base_grad_.reserve(dims_.total_coords());
  inter_grad_.reserve(dims_.total_coords());
  for (int v = 0; v < dims_.total_coords(); ++v) {
    base_grad_.emplace_back(base_.derivative(v));
    inter_grad_.emplace_back(interaction_.derivative(v));
  }
}

Polynomial<double> HybridHamiltonian::total(double t) const {
  return base_ + interaction_ * g_.value(t);
}

double HybridHamiltonian::energy(std::span<const double> coords, double t) const {
  return base_energy_.eval(coords) + g_.value(t) * inter_energy_.eval(coords);
}

void HybridHamiltonian::gradient(std::span<const double> coords, double t,
                                 std::span<double> out) const {
  const double g = g_.value(t);
  for (int v = 0; v < dims_.total_coords(); ++v) {
    out[v] = base_grad_[v].eval(coords) + g * inter_grad_[v].eval(coords);
  }
}

// ---------------------------------------------------------------------------
// Implicit midpoint

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Solves y = z0 + (dt/2) f(y) by fixed-point iteration and writes the full
// step 2y - z0 into z1.  Accepts either when the update drops below tol or
// when it stagnates at the roundoff floor.
void midpoint_step(std::span<const double> z0, const HybridHamiltonian& h, double t_mid,
                   double dt, const IntegratorConfig& cfg, std::span<double> z1,
                   std::vector<double>& y, std::vector<double>& grad) {
  const int nv = static_cast<int>(z0.size());
  double scale = 1.0;
  for (double c : z0) scale = std::max(scale, std::abs(c));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  y.assign(z0.begin(), z0.end());
  grad.resize(nv);
  double prev_delta = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_fixed_point_iters; ++it) {
    h.gradient(y, t_mid, grad);
    double delta = 0.0;
    for (int v = 0; v < nv; v += 2) {
      const double yq = z0[v] + 0.5 * dt * grad[v + 1];
      const double yp = z0[v + 1] - 0.5 * dt * grad[v];
      delta = std::max(delta, std::max(std::abs(yq - y[v]), std::abs(yp - y[v + 1])));
      y[v] = yq;
      y[v + 1] = yp;
    }
    if (delta <= cfg.fixed_point_tol || (delta >= prev_delta && delta <= floor)) {
      for (int v = 0; v < nv; ++v) z1[v] = 2.0 * y[v] - z0[v];
      return;
    }
    prev_delta = delta;
  }
  throw StepError("implicit midpoint fixed-point iteration did not converge", prev_delta);
}

}  // namespace

// ---------------------------------------------------------------------------
// Splitting integrator

namespace {

// interaction = c(x,p) * Q(X,P) with c affine; returns false if it does not
// factor that way.
struct InteractionFactor {
  Polynomial<double> c;          // affine classical factor
  Polynomial<double> q;          // quadratic form over the quantum sector
  std::vector<double> c_grad;    // constant gradient of c over (x,p)
  Eigen::VectorXd q_evals;
  Eigen::MatrixXcd q_evecs;
};

bool factor_interaction(const Polynomial<double>& inter, InteractionFactor& out) {
  const Dims d = inter.dims();
  if (inter.is_zero()) return false;
  if (inter.qm_degree() != 2) return false;
  // Group terms by their quantum-sector monomial.
  std::map<Monomial, Polynomial<double>> groups;
  for (const auto& [m, c] : inter.terms()) {
    Monomial qm(m.size(), 0), cl(m.size(), 0);
    for (int v = 0; v < 2 * d.n_cl; ++v) cl[v] = m[v];
    for (int v = 2 * d.n_cl; v < d.total_coords(); ++v) qm[v] = m[v];
    auto [it, inserted] = groups.try_emplace(qm, d);
    it->second.add_term(cl, c);
  }
  const Polynomial<double>& ref = groups.begin()->second;
  const auto& ref_lead = *ref.terms().begin();
  Polynomial<double> q(d);
  for (const auto& [qm, cpoly] : groups) {
    auto lead = cpoly.terms().find(ref_lead.first);
    if (lead == cpoly.terms().end()) return false;
    const double ratio = lead->second / ref_lead.second;
    Polynomial<double> resid = cpoly - ref * ratio;
    for (const auto& [m, c] : resid.terms()) {
      if (std::abs(c) > 1e-12 * (1.0 + std::abs(ratio))) return false;
    }
    q.add_term(qm, ratio);
  }
  if (ref.total_degree() > 1) return false;  // affine classical factor only
  HermitianOperator q_op = [&] {
    try {
      return operator_from_quadratic_form(q);
    } catch (const InvariantError&) {
      throw InvariantError("splitting integrator: interaction quantum factor is not a quadratic form");
    }
  }();
  out.c = ref;
  out.q = q;
  out.c_grad.assign(2 * d.n_cl, 0.0);
  for (int v = 0; v < 2 * d.n_cl; ++v) {
    const Polynomial<double> dv = ref.derivative(v);
    if (dv.total_degree() > 0) return false;
    out.c_grad[v] = dv.is_zero() ? 0.0 : dv.terms().begin()->second;
  }
  out.q_evals = q_op.eigenvalues();
  out.q_evecs = q_op.eigenvectors();
  return true;
}

}  // namespace

struct SplitFlow::Impl {
  Dims dims;

  // quantum sector
  bool has_qm = false;
  Eigen::VectorXd qm_evals;
  Eigen::MatrixXcd qm_evecs;

  // classical sector
  enum class ClKind { None, AffineExact, SeparableKick } cl_kind = ClKind::None;
  Eigen::MatrixXd cl_hessian;   // A in H_cl = u^T A u / 2 + b^T u + const
  Eigen::VectorXd cl_linear;    // b
  std::vector<CompiledPoly> kinetic_grad;    // dT/dp_k for the separable path
  std::vector<CompiledPoly> potential_grad;  // dV/dx_k

  // interaction
  bool has_interaction = false;
  InteractionFactor inter;
  CompiledPoly q_eval;
  const Schedule* coupling = nullptr;
  const HybridHamiltonian* h = nullptr;

  // per-dt caches (guarded; the hot path reuses one dt)
  mutable std::mutex cache_mutex;
  mutable std::vector<std::pair<double, Eigen::MatrixXcd>> qm_unitaries;  // tau -> U
  mutable std::vector<std::pair<double, Eigen::MatrixXd>> cl_flows;       // tau -> affine map

  Eigen::MatrixXcd qm_unitary(double tau) const {
    {
      std::scoped_lock lock(cache_mutex);
      for (const auto& [t, u] : qm_unitaries) {
        if (t == tau) return u;
      }
    }
    Eigen::VectorXcd phases(qm_evals.size());
    for (Eigen::Index j = 0; j < qm_evals.size(); ++j) {
      phases(j) = std::exp(std::complex<double>(0.0, -qm_evals(j) * tau));
    }
    Eigen::MatrixXcd u = qm_evecs * phases.asDiagonal() * qm_evecs.adjoint();
    std::scoped_lock lock(cache_mutex);
    qm_unitaries.emplace_back(tau, u);
    return u;
  }

  // Exact flow of the affine-linear classical field u' = J(Au + b) over tau,
  // as an augmented (2n+1) matrix acting on (u, 1).
  Eigen::MatrixXd cl_flow(double tau) const {
    {
      std::scoped_lock lock(cache_mutex);
      for (const auto& [t, m] : cl_flows) {
        if (t == tau) return m;
      }
    }
    const int m = 2 * dims.n_cl;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k < dims.n_cl; ++k) {
      // row for x_k: +dH/dp ; row for p_k: -dH/dx
      gen.row(2 * k).head(m) = cl_hessian.row(2 * k + 1);
      gen(2 * k, m) = cl_linear(2 * k + 1);
      gen.row(2 * k + 1).head(m) = -cl_hessian.row(2 * k);
      gen(2 * k + 1, m) = -cl_linear(2 * k);
    }
    Eigen::MatrixXd flow = (gen * tau).exp();
    std::scoped_lock lock(cache_mutex);
    cl_flows.emplace_back(tau, flow);
    return flow;
  }

  void apply_qm(std::vector<double>& coords, const Eigen::MatrixXcd& u) const {
    const int n = dims.n_qm;
    Eigen::VectorXcd a(n);
    for (int i = 0; i < n; ++i) {
      a(i) = std::complex<double>(coords[qm_x(dims, i)], coords[qm_p(dims, i)]);
    }
    a = u * a;
    for (int i = 0; i < n; ++i) {
      coords[qm_x(dims, i)] = a(i).real();
      coords[qm_p(dims, i)] = a(i).imag();
    }
  }

  void apply_cl(std::vector<double>& coords, double tau) const {
    if (cl_kind == ClKind::None) return;
    const int m = 2 * dims.n_cl;
    if (cl_kind == ClKind::AffineExact) {
      const Eigen::MatrixXd flow = cl_flow(tau);
      Eigen::VectorXd u(m + 1);
      for (int v = 0; v < m; ++v) u(v) = coords[v];
      u(m) = 1.0;
      u = flow * u;
      for (int v = 0; v < m; ++v) coords[v] = u(v);
      return;
    }
    // kick-drift-kick over the separable split T(p) + V(x)
    for (int k = 0; k < dims.n_cl; ++k) {
      coords[cl_p(dims, k)] -= 0.5 * tau * potential_grad[k].eval(coords);
    }
    for (int k = 0; k < dims.n_cl; ++k) {
      coords[cl_x(dims, k)] += tau * kinetic_grad[k].eval(coords);
    }
    for (int k = 0; k < dims.n_cl; ++k) {
      coords[cl_p(dims, k)] -= 0.5 * tau * potential_grad[k].eval(coords);
    }
  }

  void apply_interaction(std::vector<double>& coords, double g, double tau) const {
    if (!has_interaction || g == 0.0) return;
    const double q0 = q_eval.eval(coords);
    const double c0 = inter.c.eval(coords);
    // classical drift at frozen Q, then the quantum rotation at frozen c.
    for (int k = 0; k < dims.n_cl; ++k) {
      coords[cl_x(dims, k)] += tau * g * inter.c_grad[cl_p(dims, k)] * q0;
      coords[cl_p(dims, k)] -= tau * g * inter.c_grad[cl_x(dims, k)] * q0;
    }
    const double angle_scale = g * c0 * tau;
    const int n = dims.n_qm;
    Eigen::VectorXcd a(n);
    for (int i = 0; i < n; ++i) {
      a(i) = std::complex<double>(coords[qm_x(dims, i)], coords[qm_p(dims, i)]);
    }
    Eigen::VectorXcd b = inter.q_evecs.adjoint() * a;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      b(j) *= std::exp(std::complex<double>(0.0, -inter.q_evals(j) * angle_scale));
    }
    a = inter.q_evecs * b;
    for (int i = 0; i < n; ++i) {
      coords[qm_x(dims, i)] = a(i).real();
      coords[qm_p(dims, i)] = a(i).imag();
    }
  }
};

SplitFlow::SplitFlow(const HybridHamiltonian& h) {
  auto impl = std::make_shared<Impl>();
  impl->dims = h.dims();
  impl->h = &h;
  impl->coupling = &h.coupling();

  impl->has_qm = h.h_qm().matrix().cwiseAbs().maxCoeff() > 0.0;
  if (impl->has_qm) {
    impl->qm_evals = h.h_qm().eigenvalues();
    impl->qm_evecs = h.h_qm().eigenvectors();
  }

  const Polynomial<double>& hcl = h.h_cl();
  const Dims d = h.dims();
  if (hcl.is_zero() || hcl.total_degree() == 0) {
    impl->cl_kind = Impl::ClKind::None;
  } else if (hcl.total_degree() <= 2) {
    const int m = 2 * d.n_cl;
    impl->cl_hessian = Eigen::MatrixXd::Zero(m, m);
    impl->cl_linear = Eigen::VectorXd::Zero(m);
    for (int v = 0; v < m; ++v) {
      const Polynomial<double> dv = hcl.derivative(v);
      for (const auto& [mono, c] : dv.terms()) {
        int deg = 0, var = -1;
        for (int w = 0; w < m; ++w) {
          deg += mono[w];
          if (mono[w] == 1) var = w;
        }
        if (deg == 0) {
          impl->cl_linear(v) += c;
        } else {
          impl->cl_hessian(v, var) += c;  // deg == 1 since total degree <= 2
        }
      }
    }
    impl->cl_kind = Impl::ClKind::AffineExact;
  } else {
    // separable T(p) + V(x)?
    Polynomial<double> kin(d), pot(d);
    for (const auto& [mono, c] : hcl.terms()) {
      bool has_x = false, has_p = false;
      for (int k = 0; k < d.n_cl; ++k) {
        has_x |= mono[cl_x(d, k)] > 0;
        has_p |= mono[cl_p(d, k)] > 0;
      }
      if (has_x && has_p) {
        throw InvariantError(
            "splitting integrator requires a quadratic or separable classical Hamiltonian");
      }
      (has_p ? kin : pot).add_term(mono, c);
    }
    for (int k = 0; k < d.n_cl; ++k) {
      impl->kinetic_grad.emplace_back(kin.derivative(cl_p(d, k)));
      impl->potential_grad.emplace_back(pot.derivative(cl_x(d, k)));
    }
    impl->cl_kind = Impl::ClKind::SeparableKick;
  }

  if (!h.interaction().is_zero()) {
    if (!factor_interaction(h.interaction(), impl->inter)) {
      throw InvariantError(
          "splitting integrator requires the interaction to factor as an affine classical "
          "function times a quadratic form");
    }
    impl->q_eval = CompiledPoly(impl->inter.q);
    impl->has_interaction = true;
  }
  impl_ = std::move(impl);
}

void SplitFlow::step(std::vector<double>& coords, double t, double dt) const {
  const Impl& im = *impl_;
  const double g = im.coupling->value(t + 0.5 * dt);
  im.apply_interaction(coords, g, 0.5 * dt);
  if (im.has_qm) {
    const Eigen::MatrixXcd u_half = im.qm_unitary(0.5 * dt);
    im.apply_qm(coords, u_half);
    im.apply_cl(coords, dt);
    im.apply_qm(coords, u_half);
  } else {
    im.apply_cl(coords, dt);
  }
  im.apply_interaction(coords, g, 0.5 * dt);
}

// ---------------------------------------------------------------------------
// Stepping drivers

namespace {

int step_count(double t0, double t1, double dt) {
  const double span = t1 - t0;
  int n = static_cast<int>(std::ceil(span / dt - 1e-9));
  return std::max(n, 1);
}

}  // namespace

Propagator::Propagator(const HybridHamiltonian& h, const IntegratorConfig& cfg)
    : h_(h), cfg_(cfg) {
  if (!(cfg.dt > 0)) throw InvariantError("integrator step must be positive");
  if (!(cfg.fixed_point_tol >= 0)) throw InvariantError("fixed-point tolerance must be >= 0");
  if (cfg.scheme == Scheme::LeapfrogSplit) split_.emplace(h);
}

void Propagator::step(std::vector<double>& coords, double t, double dt) {
  if (cfg_.scheme == Scheme::LeapfrogSplit) {
    split_->step(coords, t, dt);
    return;
  }
  z1_.resize(coords.size());
  midpoint_step(coords, h_, t + 0.5 * dt, dt, cfg_, z1_, y_, grad_);
  coords.swap(z1_);
}

HybridPhasePoint Propagator::endpoint(const HybridPhasePoint& point, double t0, double t1) {
  require_same_dims(point.dims(), h_.dims(), "propagate");
  if (!(t1 > t0)) throw InvariantError("propagate needs t1 > t0");
  const int n = step_count(t0, t1, cfg_.dt);
  std::vector<double> z = point.flat();
  double t = t0;
  for (int k = 0; k < n; ++k) {
    const double t_next = (k == n - 1) ? t1 : t0 + (k + 1) * cfg_.dt;
    step(z, t, t_next - t);
    t = t_next;
  }
  return HybridPhasePoint::from_flat(h_.dims(), z);
}

Trajectory Propagator::run(const HybridPhasePoint& point, double t0, double t1) {
  require_same_dims(point.dims(), h_.dims(), "propagate");
  if (!(t1 > t0)) throw InvariantError("propagate needs t1 > t0");
  const int n = step_count(t0, t1, cfg_.dt);
  const int stride = std::max(cfg_.record_every, 1);

  Trajectory traj;
  traj.dims = h_.dims();
  std::vector<double> z = point.flat();
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.points.push_back(HybridPhasePoint::from_flat(h_.dims(), z));
    traj.energy.push_back(h_.energy(z, t));
    traj.constraint.push_back(norm_constraint(traj.points.back().qm));
  };
  record(t0);
  double t = t0;
  for (int k = 0; k < n; ++k) {
    const double t_next = (k == n - 1) ? t1 : t0 + (k + 1) * cfg_.dt;
    step(z, t, t_next - t);
    t = t_next;
    if ((k + 1) % stride == 0 || k == n - 1) record(t);
  }
  return traj;
}

HybridPhasePoint flow_step(const HybridPhasePoint& point, const HybridHamiltonian& h, double t,
                           const IntegratorConfig& cfg) {
  require_same_dims(point.dims(), h.dims(), "flow_step");
  Propagator prop(h, cfg);
  std::vector<double> z = point.flat();
  prop.step(z, t, cfg.dt);
  return HybridPhasePoint::from_flat(h.dims(), z);
}

Trajectory propagate(const HybridPhasePoint& point, const HybridHamiltonian& h, double t0,
                     double t1, const IntegratorConfig& cfg) {
  Propagator prop(h, cfg);
  return prop.run(point, t0, t1);
}

HybridPhasePoint propagate_endpoint(const HybridPhasePoint& point, const HybridHamiltonian& h,
                                    double t0, double t1, const IntegratorConfig& cfg) {
  Propagator prop(h, cfg);
  return prop.endpoint(point, t0, t1);
}

double Trajectory::energy_drift() const {
  double d = 0.0;
  for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
  return d;
}

double Trajectory::constraint_drift() const {
  double d = 0.0;
  for (double c : constraint) d = std::max(d, std::abs(c - constraint.front()));
  return d;
}

StateVector schrodinger_oracle(const StateVector& psi, const HermitianOperator& hq, double t) {
  if (psi.dim() != hq.dim()) throw DimensionError("schrodinger oracle: dimension mismatch");
  const Eigen::VectorXcd coeffs = hq.eigenvectors().adjoint() * psi.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.dim());
  for (int j = 0; j < psi.dim(); ++j) {
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -hq.eigenvalues()(j) * t));
    out += phase * coeffs(j) * hq.eigenvectors().col(j);
  }
  return StateVector(std::move(out));
}

std::vector<std::vector<double>> ehrenfest_means(const Trajectory& traj,
                                                 const std::vector<HermitianOperator>& ops) {
  std::vector<std::vector<double>> out;
  out.reserve(ops.size());
  std::vector<std::vector<double>> flats;
  flats.reserve(traj.points.size());
  for (const auto& p : traj.points) flats.push_back(p.flat());
  for (const auto& op : ops) {
    if (op.dim() != traj.dims.n_qm) throw DimensionError("ehrenfest means: operator dimension");
    CompiledPoly form(quadratic_form(op, traj.dims.n_cl));
    std::vector<double> series;
    series.reserve(flats.size());
    for (const auto& z : flats) series.push_back(form.eval(z));
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace hysim
