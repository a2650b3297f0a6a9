// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Every tolerance is pinned here, in code.  Randomized families are seeded
// and deterministic.  Comparators are independent of the code paths they
// check: eigendecomposition oracles, finite-size statistics bounds, exact
// rational algebra, and closed-form linear-system solutions.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "hysim/cli.hpp"
#include "hysim/io.hpp"
#include "hysim/scenarios.hpp"
#include "oracles.hpp"

using namespace hysim;
using namespace hysim::testing;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int index, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << index << ": " << name;
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double v) { return fmt_double(v); }

// ---------------------------------------------------------------------------
// 1. Pointer-model reproduction at the stated statistics.

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  ToyModelConfig cfg;  // defaults are exactly the stated parameters
  cfg.f = 5.0;
  cfg.w_plus = 0.3;
  cfg.w_minus = 0.7;
  cfg.sigma_x = 0.5;
  cfg.count = 100000;
  cfg.seed = kDefaultSeed;
  const auto res = run_toy_measurement(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = res.report.passed() && seconds < 60.0;
  std::ostringstream detail;
  detail << "endpoint dev " << fmt(res.max_endpoint_deviation) << " (tol 1e-10)";
  for (const auto& row : res.report.checks) {
    if (!row.pass) detail << "; FAILED " << row.name << " " << fmt(row.measured);
  }
  detail << "; runtime " << fmt(seconds) << " s";
  verdict(1, "toy-model pointer reproduction", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 2. Hamiltonian flow vs the eigendecomposition oracle.

void criterion_2() {
  Prng rng(20250801);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + rep % 7;  // N in [2, 8]
    Eigen::MatrixXcd m = random_hermitian(rng, n);
    // moderate spectral radius so the stated dt resolves all phases
    const HermitianOperator probe(m);
    const double radius = probe.eigenvalues().cwiseAbs().maxCoeff();
    m *= 0.08 / std::max(radius, 1e-12);
    const HermitianOperator hq(m);

    const Dims d{1, n};
    const HybridHamiltonian h(d, Polynomial<double>(d), hq, Polynomial<double>(d));
    const auto psi = random_state(rng, n);
    const HybridPhasePoint start{ClassicalPhasePoint(1, {0.0, 0.0}), expand_state(psi)};
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const auto end = propagate_endpoint(start, h, 0.0, 10.0, cfg);
    worst = std::max(worst, ray_distance(contract_state(end.qm), schrodinger_oracle(psi, hq, 10.0)));
  }
  verdict(2, "Schrodinger equivalence of the flow", worst <= 1e-8,
          "max ray distance " + fmt(worst) + " (tol 1e-8, 20 systems, t=10, dt=1e-3)");
}

// ---------------------------------------------------------------------------
// 3. Conservation over 1e5 implicit-midpoint steps in both scenarios.

void criterion_3() {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.fixed_point_tol = 1e-14;
  cfg.max_fixed_point_iters = 200;
  cfg.record_every = 200;

  std::ostringstream detail;
  bool pass = true;

  {  // pointer-model Hamiltonian with a constant coupling (time independent)
    const Dims d{1, 2};
    const auto sz = quadratic_form(HermitianOperator::pauli_z(), d.n_cl);
    const auto p1 = Polynomial<double>::variable(d, cl_p(d, 0));
    const HybridHamiltonian h(
        d, p1 * p1 * 0.5,
        HermitianOperator(0.05 * HermitianOperator::pauli_x().matrix()), p1 * sz * 0.25);
    const HybridPhasePoint start{ClassicalPhasePoint(1, {0.3, 0.4}),
                                 expand_state(StateVector{{0.8, 0.1}, {0.2, 0.5}}.normalized())};
    const auto traj = propagate(start, h, 0.0, 100.0, cfg);
    double max_c = 0.0;
    for (double c : traj.constraint) max_c = std::max(max_c, std::abs(c - 1.0));
    const double de = traj.energy_drift();
    pass = pass && max_c <= 1e-10 && de <= 1e-9;
    detail << "toy |C-1| " << fmt(max_c) << ", dE " << fmt(de);
  }
  {  // coupled-oscillator Hamiltonian
    PeresTernoConfig pcfg;
    pcfg.lambda = 0.01;
    pcfg.n_levels = 12;
    pcfg.alpha_re = 0.5;
    pcfg.t_max = 100.0;
    pcfg.dt = 1e-3;
    pcfg.record_every = 200;
    pcfg.tracking_tol = 1.0;  // tracking is criterion 8's job
    const auto res = run_peres_terno(pcfg);
    double max_c = 0.0;
    for (double c : res.trajectory.constraint) max_c = std::max(max_c, std::abs(c - 1.0));
    const double de = res.trajectory.energy_drift();
    pass = pass && max_c <= 1e-10 && de <= 1e-9;
    detail << "; oscillators |C-1| " << fmt(max_c) << ", dE " << fmt(de);
  }
  verdict(3, "conservation over 1e5 midpoint steps", pass,
          detail.str() + " (tol 1e-10 / 1e-9)");
}

// ---------------------------------------------------------------------------
// 4. Commutator expectation equals the quantum bracket, 200 random triples.

void criterion_4() {
  Prng rng(424242);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 5;  // N in [2, 6]
    const HermitianOperator f(random_hermitian(rng, n));
    const HermitianOperator g(random_hermitian(rng, n));
    const auto psi = random_state(rng, n);
    const auto bracket = qm_bracket(quadratic_form(f), quadratic_form(g));
    const double sym = bracket.eval(expand_state(psi).coords);
    worst = std::max(worst, std::abs(sym - commutator_expectation(f, g, psi)));
  }
  verdict(4, "commutator = quantum Poisson bracket", worst <= 1e-10,
          "max deviation " + fmt(worst) + " over 200 triples (tol 1e-10)");
}

// ---------------------------------------------------------------------------
// 5. Bracket axioms as exact zero-polynomial identities.

void criterion_5() {
  Prng rng(55005);
  int checked = 0;
  bool pass = true;
  for (int rep = 0; rep < 100 && pass; ++rep) {
    const Dims d{1 + static_cast<int>(rng.next_u64() % 3),
                 1 + static_cast<int>(rng.next_u64() % 3)};
    const auto a = random_rational_poly(rng, d, 4, 5);
    const auto b = random_rational_poly(rng, d, 4, 5);
    const auto c = random_rational_poly(rng, d, 4, 5);
    const Rational alpha = rational(7, 3), beta = rational(-5, 4);
    auto axioms = [&](auto bracket) {
      const bool bilinear =
          (bracket(a * alpha + b * beta, c) - (bracket(a, c) * alpha + bracket(b, c) * beta))
              .is_zero();
      const bool antisym = (bracket(a, b) + bracket(b, a)).is_zero();
      const bool leibniz =
          (bracket(a, b * c) - (bracket(a, b) * c + b * bracket(a, c))).is_zero();
      const bool jacobi = (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) +
                           bracket(c, bracket(a, b)))
                              .is_zero();
      return bilinear && antisym && leibniz && jacobi;
    };
    pass = pass && axioms([](const auto& f, const auto& g) { return cl_bracket(f, g); });
    pass = pass && axioms([](const auto& f, const auto& g) { return qm_bracket(f, g); });
    pass = pass && axioms([](const auto& f, const auto& g) { return hybrid_bracket(f, g); });
    ++checked;
  }
  verdict(5, "bracket axioms (exact rational identities)", pass,
          std::to_string(checked) + "/100 triples, all three brackets");
}

// ---------------------------------------------------------------------------
// 6. Sector separability and reduction.

void criterion_6() {
  Prng rng(660066);
  bool pass = true;
  for (int rep = 0; rep < 100 && pass; ++rep) {
    const Dims d{1 + static_cast<int>(rng.next_u64() % 2),
                 1 + static_cast<int>(rng.next_u64() % 2)};
    const auto a_cl = random_cl_poly(rng, d, 4, 4);
    // purely quantum polynomial
    auto raw = random_rational_poly(rng, d, 4, 4);
    Polynomial<Rational> b_qm(d);
    for (const auto& [m, c] : raw.terms()) {
      Monomial qm_only(m.size(), 0);
      for (int v = 2 * d.n_cl; v < d.total_coords(); ++v) qm_only[v] = m[v];
      b_qm.add_term(qm_only, c);
    }
    const auto any = random_rational_poly(rng, d, 4, 5);
    pass = pass && hybrid_bracket(a_cl, b_qm).is_zero();
    pass = pass && (hybrid_bracket(a_cl, any) - cl_bracket(a_cl, any)).is_zero();
    pass = pass && (hybrid_bracket(b_qm, any) - qm_bracket(b_qm, any)).is_zero();
    pass = pass && (hybrid_bracket(a_cl, a_cl)).is_zero() && (hybrid_bracket(b_qm, b_qm)).is_zero();
  }
  verdict(6, "sector separability and reduction", pass, "100 random cases, exact");
}

// ---------------------------------------------------------------------------
// 7. Proliferation, classification, and closure to depth 3.

void criterion_7() {
  Prng rng(777321);
  const Dims d{1, 2};
  bool pass = true;
  std::size_t escapes = 0;
  int max_seen_degree = 0;
  for (int rep = 0; rep < 100 && pass; ++rep) {
    Polynomial<Rational> a_cl(d), b_cl(d);
    do {
      a_cl = random_cl_poly(rng, d, 2, 3);
      b_cl = random_cl_poly(rng, d, 2, 3);
    } while (cl_bracket(a_cl, b_cl).is_zero());
    Polynomial<Rational> qa(d), qb(d);
    do {
      qa = random_balanced_quadratic(rng, d);
    } while (qa.is_zero());
    do {
      qb = random_balanced_quadratic(rng, d);
    } while (qb.is_zero());

    const auto a = a_cl * qa;
    const auto b = b_cl * qb;
    const auto bracket = hybrid_bracket(a, b);
    const auto cls = classify(bracket);
    pass = pass && cls.phase_class == PhaseClass::AlmostClassical;
    pass = pass && !bracket.qm_degree_part(4).is_zero();

    ClosureProbeConfig ccfg;
    ccfg.depth = 3;
    const auto probe = run_closure_probe(a, b, ccfg);
    escapes += probe.total_escapes;
    for (const auto& row : probe.levels) max_seen_degree = std::max(max_seen_degree, row.max_qm_degree);
    pass = pass && probe.total_escapes == 0 && !probe.budget_exceeded;
  }
  pass = pass && max_seen_degree <= 8;
  verdict(7, "proliferation and closure of the balanced set", pass,
          "100 pairs; max (X,P) degree " + std::to_string(max_seen_degree) +
              "; escapes " + std::to_string(escapes));
}

// ---------------------------------------------------------------------------
// 8. Coupled-oscillator benchmark.

void criterion_8() {
  bool pass = true;
  std::ostringstream detail;
  {
    PeresTernoConfig cfg;  // lambda = 0.1, N = 20, one beat period
    cfg.dt = 2e-4;
    cfg.record_every = 500;
    const auto res = run_peres_terno(cfg);
    pass = pass && res.max_tracking_error <= 1e-6 && !res.truncation_limited &&
           res.max_top_occupation < 1e-6;
    detail << "coupled: tracking " << fmt(res.max_tracking_error) << " (tol 1e-6) over t="
           << fmt(cfg.effective_t_max()) << ", top occ " << fmt(res.max_top_occupation);
  }
  {
    PeresTernoConfig cfg;
    cfg.lambda = 0.0;
    cfg.dt = 1e-4;
    cfg.t_max = 2.0 * 3.14159265358979323846;
    cfg.record_every = 200;
    const auto res = run_peres_terno(cfg);
    pass = pass && res.max_tracking_error <= 1e-8;
    detail << "; decoupled: " << fmt(res.max_tracking_error) << " (tol 1e-8)";
  }
  verdict(8, "coupled-oscillator mean benchmark", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 9. Reproducibility and phase invariance of the artifacts.

void criterion_9() {
  const fs::path base = fs::temp_directory_path() / "hysim_acceptance_repro";
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path cfg_path = base / "toy.cfg";
  {
    std::ofstream out(cfg_path);
    out << "[system]\nf = 5.0\nT = 1.0\nw_plus = 0.3\n[ensemble]\ncount = 20000\nseed = 321\n"
           "sigma_x = 0.5\n[integrator]\nsteps = 100\n[output]\nbins = 121\n";
  }
  RunConfig rc;
  rc.command = Command::ScenarioToy;
  rc.config_path = cfg_path;

  rc.out_dir = base / "a";
  const int code_a = dispatch(rc);
  rc.out_dir = base / "b";
  const int code_b = dispatch(rc);
  bool pass = code_a == kExitOk && code_b == kExitOk;
  for (const char* name : {"report.json", "marginal.csv", "run_manifest.json"}) {
    pass = pass && read_text_file(base / "a" / name) == read_text_file(base / "b" / name);
  }

  // re-randomized global phases: same physics within tolerances
  const fs::path cfg2_path = base / "toy_rephased.cfg";
  {
    std::ofstream out(cfg2_path);
    out << "[system]\nf = 5.0\nT = 1.0\nw_plus = 0.3\n[ensemble]\ncount = 20000\nseed = 321\n"
           "phase_seed = 987654\nsigma_x = 0.5\n[integrator]\nsteps = 100\n[output]\nbins = 121\n";
  }
  rc.config_path = cfg2_path;
  rc.out_dir = base / "c";
  pass = pass && dispatch(rc) == kExitOk;

  const auto ra = nlohmann::json::parse(read_text_file(base / "a" / "report.json"));
  const auto rb = nlohmann::json::parse(read_text_file(base / "c" / "report.json"));
  double max_delta = 0.0;
  for (const char* q : {"branch_mass_plus", "branch_mass_minus", "branch_mean_plus",
                        "branch_mean_minus"}) {
    max_delta = std::max(max_delta, std::abs(ra["quantities"][q].get<double>() -
                                             rb["quantities"][q].get<double>()));
  }
  pass = pass && max_delta <= 1e-9 && rb["passed"].get<bool>();
  verdict(9, "byte reproducibility and phase invariance", pass,
          "rerun bytes identical; phase re-randomization shifted stats by " + fmt(max_delta));
}

}  // namespace

int main() {
  std::cout << "acceptance suite (" << kToolName << " " << kToolVersion << ")\n";
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance suite aborted: " << e.what() << std::endl;
    return 1;
  }
  if (failures == 0) {
    std::cout << "all criteria passed" << std::endl;
    return 0;
  }
  std::cout << failures << " criteria failed" << std::endl;
  return 1;
}
