#include "hysim/cli.hpp"

#include <iostream>

#include "hysim/config.hpp"
#include "hysim/io.hpp"
#include "hysim/scenarios.hpp"

namespace hysim {

namespace {

Scheme parse_scheme(const std::string& name, const std::string& where) {
  if (name == "implicit_midpoint" || name == "midpoint") return Scheme::ImplicitMidpoint;
  if (name == "leapfrog_split" || name == "split") return Scheme::LeapfrogSplit;
  throw ConfigError(where + ": unknown scheme '" + name +
                    "' (expected implicit_midpoint or leapfrog_split)");
}

int parse_coord_name(const std::string& name, Dims dims) {
  if (name.size() < 2) throw ConfigError("bad coordinate name '" + name + "'");
  const char kind = name[0];
  int index = 0;
  try {
    index = std::stoi(name.substr(1));
  } catch (const std::exception&) {
    throw ConfigError("bad coordinate name '" + name + "'");
  }
  const bool classical = (kind == 'x' || kind == 'p');
  const bool quantum = (kind == 'X' || kind == 'P');
  if (!classical && !quantum) throw ConfigError("bad coordinate name '" + name + "'");
  const int limit = classical ? dims.n_cl : dims.n_qm;
  if (index < 1 || index > limit) {
    throw ConfigError("coordinate '" + name + "' out of range");
  }
  switch (kind) {
    case 'x': return cl_x(dims, index - 1);
    case 'p': return cl_p(dims, index - 1);
    case 'X': return qm_x(dims, index - 1);
    default: return qm_p(dims, index - 1);
  }
}

// Configuration-building mistakes surface as ConfigError regardless of which
// module raised them.
template <typename F>
auto config_phase(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json run_info(const RunConfig& rc, const std::string& command,
                        const std::optional<std::string>& config_text, std::uint64_t seed) {
  nlohmann::json info = {{"command", command},
                         {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                         {"seed", seed}};
  if (rc.config_path) {
    info["config"] = {{"path", rc.config_path->string()},
                      {"fnv1a64", fnv1a64_hex(config_text.value_or(""))}};
  } else {
    info["config"] = "defaults";
  }
  return info;
}

struct LoadedDoc {
  ConfigDoc doc = ConfigDoc::parse("");
  std::optional<std::string> text;
};

LoadedDoc load_doc(const RunConfig& rc) {
  LoadedDoc out;
  if (rc.config_path) {
    out.text = read_text_file(*rc.config_path);
    out.doc = ConfigDoc::parse(*out.text);
  }
  return out;
}

std::filesystem::path require_out(const RunConfig& rc) {
  if (!rc.out_dir) throw ConfigError("this command requires --out <directory>");
  return *rc.out_dir;
}

void print_report(const ScenarioReport& rep) {
  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << rep.scenario << ": " << c.name
              << " (measured " << fmt_double(c.measured) << ", tolerance "
              << fmt_double(c.tolerance) << ")\n";
  }
  for (const auto& n : rep.notes) std::cout << "[note] " << n << "\n";
}

// ---------------------------------------------------------------------------

int cmd_scenario_toy(const RunConfig& rc) {
  LoadedDoc loaded = load_doc(rc);
  bool write_particles = false;
  ToyModelConfig cfg = config_phase([&] {
    ToyModelConfig c;
    SectionReader system(loaded.doc, "system");
    c.f = system.get_double("f", c.f);
    c.pulse_duration = system.get_double("T", c.pulse_duration);
    c.w_plus = system.get_double("w_plus", c.w_plus);
    c.w_minus = system.get_double("w_minus", 1.0 - c.w_plus);
    c.idealized = system.get_bool("idealized", c.idealized);
    c.mass = system.get_double("mass", c.mass);
    c.omega_qm = system.get_double("omega_qm", c.omega_qm);
    SectionReader ens(loaded.doc, "ensemble");
    c.count = ens.get_int("count", c.count);
    c.seed = ens.get_u64("seed", c.seed);
    c.phase_seed = ens.get_optional_u64("phase_seed");
    c.sigma_x = ens.get_double("sigma_x", c.sigma_x);
    c.sigma_p = ens.get_double("sigma_p", c.sigma_p);
    c.x0 = ens.get_double("x0", c.x0);
    c.p0 = ens.get_double("p0", c.p0);
    SectionReader integ(loaded.doc, "integrator");
    c.steps = integ.get_int("steps", c.steps);
    c.scheme = parse_scheme(integ.get_string("scheme", "leapfrog_split"), "[integrator] scheme");
    SectionReader outp(loaded.doc, "output");
    c.bins = outp.get_int("bins", c.bins);
    write_particles = outp.get_bool("write_particles", false);
    loaded.doc.assert_fully_consumed({"system", "ensemble", "integrator", "output"});
    if (rc.seed_override) c.seed = *rc.seed_override;
    c.validate();
    return c;
  });

  OutputWriter out(require_out(rc));
  ToyModelResult res = run_toy_measurement(cfg);
  out.write("report.json", res.report.to_json().dump(2) + "\n");
  out.write("marginal.csv", marginal_csv(res.x_marginal));
  if (write_particles) {
    out.write("ensemble_initial.csv", ensemble_csv(res.initial));
    out.write("ensemble_final.csv", ensemble_csv(res.final_state));
  }
  out.write_manifest(run_info(rc, "scenario-toy", loaded.text, cfg.seed));
  print_report(res.report);
  return res.report.passed() ? kExitOk : kExitNumeric;
}

int cmd_scenario_peres(const RunConfig& rc) {
  LoadedDoc loaded = load_doc(rc);
  bool write_trajectory = true;
  PeresTernoConfig cfg = config_phase([&] {
    PeresTernoConfig c;
    SectionReader system(loaded.doc, "system");
    c.mass = system.get_double("mass", c.mass);
    c.omega_cl = system.get_double("omega_cl", c.omega_cl);
    c.omega_qm = system.get_double("omega_qm", c.omega_qm);
    c.lambda = system.get_double("lambda", c.lambda);
    c.n_levels = system.get_int("N", c.n_levels);
    c.alpha_re = system.get_double("alpha_re", c.alpha_re);
    c.alpha_im = system.get_double("alpha_im", c.alpha_im);
    c.x0 = system.get_double("x0", c.x0);
    c.p0 = system.get_double("p0", c.p0);
    SectionReader ens(loaded.doc, "ensemble");
    c.count = ens.get_int("count", c.count);
    c.seed = ens.get_u64("seed", c.seed);
    c.ensemble_sigma = ens.get_double("sigma", c.ensemble_sigma);
    c.ensemble_t = ens.get_double("t", c.ensemble_t);
    c.ensemble_dt = ens.get_double("dt", c.ensemble_dt);
    SectionReader integ(loaded.doc, "integrator");
    c.dt = integ.get_double("dt", c.dt);
    c.t_max = integ.get_double("t_max", c.t_max);
    c.record_every = integ.get_int("record_every", c.record_every);
    c.fixed_point_tol = integ.get_double("fixed_point_tol", c.fixed_point_tol);
    c.scheme =
        parse_scheme(integ.get_string("scheme", "implicit_midpoint"), "[integrator] scheme");
    SectionReader outp(loaded.doc, "output");
    write_trajectory = outp.get_bool("write_trajectory", true);
    loaded.doc.assert_fully_consumed({"system", "ensemble", "integrator", "output"});
    if (rc.seed_override) c.seed = *rc.seed_override;
    c.validate();
    return c;
  });

  OutputWriter out(require_out(rc));
  PeresTernoResult res = run_peres_terno(cfg);
  out.write("report.json", res.report.to_json().dump(2) + "\n");
  if (write_trajectory) out.write("trajectory.csv", trajectory_csv(res.trajectory));
  {
    std::ostringstream csv;
    csv << "t,x,p,q,pi,x_ref,p_ref,q_ref,pi_ref\n";
    for (std::size_t k = 0; k < res.times.size(); ++k) {
      csv << fmt_double(res.times[k]);
      for (double v : res.measured[k]) csv << "," << fmt_double(v);
      for (double v : res.reference[k]) csv << "," << fmt_double(v);
      csv << "\n";
    }
    out.write("means.csv", csv.str());
  }
  out.write_manifest(run_info(rc, "scenario-peres-terno", loaded.text, cfg.seed));
  print_report(res.report);
  return res.report.passed() ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------

struct HamiltonianSpec {
  Dims dims;
  HybridHamiltonian hamiltonian;
};

HamiltonianSpec read_hamiltonian(ConfigDoc& doc, Dims dims) {
  SectionReader ham(doc, "hamiltonian");
  const std::string h_cl_text = ham.get_string("h_cl", "0");
  const std::string h_qm_text = ham.get_string("h_qm", "0");
  const std::string inter_text = ham.get_string("interaction", "0");
  const double g_const = ham.get_double("g", 1.0);
  const auto pulse = ham.raw("g_pulse");

  const Polynomial<double> h_cl = to_double(parse_polynomial(h_cl_text, dims));
  const Polynomial<double> h_qm_poly = to_double(parse_polynomial(h_qm_text, dims));
  const Polynomial<double> inter = to_double(parse_polynomial(inter_text, dims));

  HermitianOperator h_qm = [&] {
    if (h_qm_poly.is_zero()) {
      return HermitianOperator(Eigen::MatrixXcd::Zero(dims.n_qm, dims.n_qm));
    }
    try {
      return operator_from_quadratic_form(h_qm_poly);
    } catch (const InvariantError& e) {
      throw ConfigError(std::string("[hamiltonian] h_qm: ") + e.what());
    }
  }();

  Schedule g = Schedule::constant(g_const);
  if (pulse) {
    std::vector<double> parts;
    std::istringstream ss(*pulse);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(std::stod(item));
    if (parts.size() < 3 || parts.size() > 4) {
      throw ConfigError("[hamiltonian] g_pulse needs t_on,t_off,amplitude[,baseline]");
    }
    g = Schedule::pulse(parts[0], parts[1], parts[2], parts.size() == 4 ? parts[3] : 0.0);
  }
  return HamiltonianSpec{dims, HybridHamiltonian(dims, h_cl, h_qm, inter, g)};
}

int cmd_simulate(const RunConfig& rc) {
  LoadedDoc loaded = load_doc(rc);
  if (!rc.config_path) throw ConfigError("simulate requires --config <file>");

  struct Setup {
    HybridHamiltonian h;
    HybridPhasePoint start;
    IntegratorConfig icfg;
    double t0, t1;
  };
  Setup setup = config_phase([&]() -> Setup {
    SectionReader system(loaded.doc, "system");
    Dims dims{system.get_int("n", 1), system.get_int("N", 1)};
    if (dims.n_cl < 1 || dims.n_qm < 1) {
      throw ConfigError("[system] needs n >= 1 and N >= 1");
    }
    std::vector<double> cl = system.get_double_list("cl", std::vector<double>(2 * dims.n_cl, 0.0));
    std::vector<double> psi_re =
        system.get_double_list("psi_re", [&] {
          std::vector<double> v(dims.n_qm, 0.0);
          v[0] = 1.0;
          return v;
        }());
    std::vector<double> psi_im = system.get_double_list("psi_im", std::vector<double>(dims.n_qm, 0.0));
    const bool normalize = system.get_bool("normalize", true);
    if (static_cast<int>(cl.size()) != 2 * dims.n_cl) {
      throw ConfigError("[system] cl needs 2n entries");
    }
    if (static_cast<int>(psi_re.size()) != dims.n_qm ||
        static_cast<int>(psi_im.size()) != dims.n_qm) {
      throw ConfigError("[system] psi_re/psi_im need N entries");
    }
    HamiltonianSpec spec = read_hamiltonian(loaded.doc, dims);

    Eigen::VectorXcd amps(dims.n_qm);
    for (int i = 0; i < dims.n_qm; ++i) amps(i) = {psi_re[i], psi_im[i]};
    StateVector psi(amps);
    if (normalize) psi = psi.normalized();

    SectionReader integ(loaded.doc, "integrator");
    IntegratorConfig icfg;
    icfg.dt = integ.get_double("dt", 1e-3);
    icfg.scheme =
        parse_scheme(integ.get_string("scheme", "implicit_midpoint"), "[integrator] scheme");
    icfg.fixed_point_tol = integ.get_double("fixed_point_tol", icfg.fixed_point_tol);
    icfg.max_fixed_point_iters = integ.get_int("max_iters", icfg.max_fixed_point_iters);
    icfg.record_every = integ.get_int("record_every", 1);
    const double t0 = integ.get_double("t0", 0.0);
    const double t1 = integ.get_double("t1", t0 + 1.0);
    loaded.doc.assert_fully_consumed({"system", "hamiltonian", "integrator", "output"});
    return Setup{std::move(spec.hamiltonian),
                 HybridPhasePoint{ClassicalPhasePoint(dims.n_cl, std::move(cl)),
                                  expand_state(psi)},
                 icfg, t0, t1};
  });

  OutputWriter out(require_out(rc));
  Trajectory traj = propagate(setup.start, setup.h, setup.t0, setup.t1, setup.icfg);
  out.write("trajectory.csv", trajectory_csv(traj));
  nlohmann::json summary = {{"steps", traj.times.size() - 1},
                            {"energy_drift", traj.energy_drift()},
                            {"constraint_drift", traj.constraint_drift()},
                            {"final_energy", traj.energy.back()},
                            {"final_constraint", traj.constraint.back()}};
  out.write("summary.json", summary.dump(2) + "\n");
  out.write_manifest(run_info(rc, "simulate", loaded.text, 0));
  std::cout << "simulate: " << traj.times.size() - 1 << " steps, energy drift "
            << fmt_double(traj.energy_drift()) << ", constraint drift "
            << fmt_double(traj.constraint_drift()) << "\n";
  return kExitOk;
}

int cmd_ensemble(const RunConfig& rc) {
  LoadedDoc loaded = load_doc(rc);
  if (!rc.config_path) throw ConfigError("ensemble requires --config <file>");

  struct Setup {
    HybridHamiltonian h;
    HybridEnsemble initial;
    IntegratorConfig icfg;
    double t0, t1;
    int marginal_coord;
    int bins;
    std::optional<std::pair<double, double>> range;
    bool write_particles;
  };
  Setup setup = config_phase([&]() -> Setup {
    SectionReader system(loaded.doc, "system");
    Dims dims{system.get_int("n", 1), system.get_int("N", 1)};
    if (dims.n_cl < 1 || dims.n_qm < 1) {
      throw ConfigError("[system] needs n >= 1 and N >= 1");
    }
    HamiltonianSpec spec = read_hamiltonian(loaded.doc, dims);

    SectionReader ens(loaded.doc, "ensemble");
    const std::string kind = ens.get_string("kind", "gaussian");
    ClassicalDistribution dist = [&] {
      if (kind == "delta") {
        return ClassicalDistribution::delta(
            ens.get_double_list("point", std::vector<double>(2 * dims.n_cl, 0.0)));
      }
      if (kind == "uniform") {
        return ClassicalDistribution::uniform(
            ens.get_double_list("lo", std::vector<double>(2 * dims.n_cl, -1.0)),
            ens.get_double_list("hi", std::vector<double>(2 * dims.n_cl, 1.0)));
      }
      if (kind != "gaussian") {
        throw ConfigError("[ensemble] kind must be gaussian, delta, or uniform");
      }
      const std::vector<double> mean =
          ens.get_double_list("mean", std::vector<double>(2 * dims.n_cl, 0.0));
      const std::vector<double> sigma =
          ens.get_double_list("sigma", std::vector<double>(2 * dims.n_cl, 1.0));
      if (mean.size() != sigma.size() || static_cast<int>(mean.size()) != 2 * dims.n_cl) {
        throw ConfigError("[ensemble] mean/sigma need 2n entries");
      }
      Eigen::VectorXd mu(mean.size());
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(mean.size(), mean.size());
      for (std::size_t i = 0; i < mean.size(); ++i) {
        mu(i) = mean[i];
        cov(i, i) = sigma[i] * sigma[i];
      }
      return ClassicalDistribution::gaussian(mu, cov);
    }();

    std::vector<double> weights =
        ens.get_double_list("weights", [&] {
          std::vector<double> w(dims.n_qm, 0.0);
          w[0] = 1.0;
          return w;
        }());
    if (static_cast<int>(weights.size()) != dims.n_qm) {
      throw ConfigError("[ensemble] weights need N entries (basis-state mixture)");
    }
    std::vector<StateVector> states;
    for (int j = 0; j < dims.n_qm; ++j) states.push_back(StateVector::basis(dims.n_qm, j));
    DensityOperator rho(weights, std::move(states));

    const int count = ens.get_int("count", 1000);
    const std::uint64_t seed = rc.seed_override.value_or(ens.get_u64("seed", kDefaultSeed));
    const auto phase_seed = ens.get_optional_u64("phase_seed");

    SectionReader integ(loaded.doc, "integrator");
    IntegratorConfig icfg;
    icfg.dt = integ.get_double("dt", 1e-3);
    icfg.scheme =
        parse_scheme(integ.get_string("scheme", "implicit_midpoint"), "[integrator] scheme");
    icfg.fixed_point_tol = integ.get_double("fixed_point_tol", icfg.fixed_point_tol);
    const double t0 = integ.get_double("t0", 0.0);
    const double t1 = integ.get_double("t1", t0 + 1.0);

    SectionReader outp(loaded.doc, "output");
    const std::string coord_name_str = outp.get_string("marginal", "x1");
    const int coord = parse_coord_name(coord_name_str, dims);
    const int bins = outp.get_int("bins", 101);
    std::optional<std::pair<double, double>> range;
    if (const auto r = outp.get_double_list("range", {}); r.size() == 2) {
      range = {r[0], r[1]};
    } else if (!r.empty()) {
      throw ConfigError("[output] range needs exactly two entries");
    }
    const bool write_particles = outp.get_bool("write_particles", true);
    loaded.doc.assert_fully_consumed({"system", "hamiltonian", "ensemble", "integrator",
                                      "output"});
    return Setup{std::move(spec.hamiltonian),
                 sample_factorized(dist, rho, count, seed, phase_seed),
                 icfg,
                 t0,
                 t1,
                 coord,
                 bins,
                 range,
                 write_particles};
  });

  OutputWriter out(require_out(rc));
  HybridEnsemble advanced = liouville_propagate(setup.initial, setup.h, setup.t0, setup.t1,
                                                setup.icfg);
  double lo = 0.0, hi = 0.0;
  if (setup.range) {
    lo = setup.range->first;
    hi = setup.range->second;
  } else {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& part : advanced.particles) {
      const double v = part.flat()[setup.marginal_coord];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double pad = 1e-9 + 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  Marginal marg = marginal(advanced, setup.marginal_coord, linear_edges(lo, hi, setup.bins));

  if (setup.write_particles) {
    out.write("ensemble_initial.csv", ensemble_csv(setup.initial));
    out.write("ensemble_final.csv", ensemble_csv(advanced));
  }
  out.write("marginal.csv", marginal_csv(marg));

  nlohmann::json summary;
  summary["count"] = advanced.size();
  summary["seed"] = advanced.seed;
  summary["phase_seed"] = advanced.phase_seed;
  summary["out_of_range_mass"] = marg.out_of_range;
  double max_c = 0.0;
  for (const auto& part : advanced.particles) {
    max_c = std::max(max_c, std::abs(norm_constraint(part.qm) - 1.0));
  }
  summary["max_constraint_deviation"] = max_c;
  nlohmann::json moments = nlohmann::json::object();
  for (int v = 0; v < setup.h.dims().total_coords(); ++v) {
    const auto [mean, var] = coordinate_moments(advanced, v);
    moments[coord_name(setup.h.dims(), v)] = {{"mean", mean}, {"variance", var}};
  }
  summary["moments"] = moments;
  out.write("summary.json", summary.dump(2) + "\n");
  out.write_manifest(run_info(rc, "ensemble", loaded.text, advanced.seed));
  std::cout << "ensemble: " << advanced.size() << " particles, max |C-1| = "
            << fmt_double(max_c) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

Dims expr_dims(const RunConfig& rc) {
  if (rc.n_cl < 0 || rc.n_qm < 0 || rc.n_cl + rc.n_qm == 0) {
    throw ConfigError("expression commands need --n/--N with n + N >= 1");
  }
  return Dims{rc.n_cl, rc.n_qm};
}

nlohmann::json class_json(const ObservableClass& cls) {
  return {{"class", to_string(cls.phase_class)},
          {"belongs_cl", cls.belongs_cl},
          {"belongs_qm", cls.belongs_qm},
          {"cl_degree", cls.cl_degree},
          {"qm_degree", cls.qm_degree}};
}

int cmd_bracket(const RunConfig& rc) {
  const Dims dims = expr_dims(rc);
  if (rc.expressions.size() != 2) throw ConfigError("bracket needs two expressions");
  const Polynomial<Rational> a =
      config_phase([&] { return parse_polynomial(rc.expressions[0], dims); });
  const Polynomial<Rational> b =
      config_phase([&] { return parse_polynomial(rc.expressions[1], dims); });
  Polynomial<Rational> result(dims);
  if (rc.bracket_kind == "hybrid") {
    result = hybrid_bracket(a, b);
  } else if (rc.bracket_kind == "cl") {
    result = cl_bracket(a, b);
  } else if (rc.bracket_kind == "qm") {
    result = qm_bracket(a, b);
  } else {
    throw ConfigError("bracket kind must be hybrid, cl, or qm");
  }
  const ObservableClass cls = classify(result);
  std::cout << print_polynomial(result) << "\n";
  std::cout << "class: " << to_string(cls.phase_class) << " (cl degree " << cls.cl_degree
            << ", qm degree " << cls.qm_degree << ")\n";
  if (rc.out_dir) {
    OutputWriter out(*rc.out_dir);
    nlohmann::json doc = {{"a", print_polynomial(a)},
                          {"b", print_polynomial(b)},
                          {"kind", rc.bracket_kind},
                          {"result", print_polynomial(result)},
                          {"classification", class_json(cls)}};
    out.write("bracket.json", doc.dump(2) + "\n");
    out.write_manifest(run_info(rc, "bracket", std::nullopt, 0));
  }
  return kExitOk;
}

int cmd_classify(const RunConfig& rc) {
  const Dims dims = expr_dims(rc);
  if (rc.expressions.size() != 1) throw ConfigError("classify needs one expression");
  const Polynomial<Rational> poly =
      config_phase([&] { return parse_polynomial(rc.expressions[0], dims); });
  const ObservableClass cls = classify(poly);
  std::cout << to_string(cls.phase_class) << "\n";
  std::cout << "belongs_cl: " << (cls.belongs_cl ? "yes" : "no")
            << ", belongs_qm: " << (cls.belongs_qm ? "yes" : "no") << ", cl degree "
            << cls.cl_degree << ", qm degree " << cls.qm_degree << "\n";
  if (rc.out_dir) {
    OutputWriter out(*rc.out_dir);
    nlohmann::json doc = {{"expression", print_polynomial(poly)},
                          {"classification", class_json(cls)}};
    out.write("classify.json", doc.dump(2) + "\n");
    out.write_manifest(run_info(rc, "classify", std::nullopt, 0));
  }
  return kExitOk;
}

int cmd_closure_probe(const RunConfig& rc) {
  const Dims dims = expr_dims(rc);
  if (rc.expressions.size() != 2) throw ConfigError("closure-probe needs two expressions");
  ClosureProbeConfig cfg;
  cfg.depth = rc.depth;
  const Polynomial<Rational> a =
      config_phase([&] { return parse_polynomial(rc.expressions[0], dims); });
  const Polynomial<Rational> b =
      config_phase([&] { return parse_polynomial(rc.expressions[1], dims); });
  ClosureProbeResult res = config_phase([&] { return run_closure_probe(a, b, cfg); });
  for (const auto& row : res.levels) {
    std::cout << "level " << row.level << ": results " << row.results << ", max qm degree "
              << row.max_qm_degree << ", max cl degree " << row.max_cl_degree << ", escapes "
              << row.escapes << "\n";
  }
  print_report(res.report);
  if (rc.out_dir) {
    OutputWriter out(*rc.out_dir);
    out.write("closure_probe.json", res.report.to_json().dump(2) + "\n");
    out.write_manifest(run_info(rc, "closure-probe", std::nullopt, 0));
  }
  return res.report.passed() ? kExitOk : kExitNumeric;
}

nlohmann::json error_json(int code, const std::string& type, const std::string& message) {
  return {{"error", {{"code", code}, {"type", type}, {"message", message}}}};
}

}  // namespace

int dispatch(const RunConfig& cfg) {
  try {
    switch (cfg.command) {
      case Command::Simulate: return cmd_simulate(cfg);
      case Command::Ensemble: return cmd_ensemble(cfg);
      case Command::Bracket: return cmd_bracket(cfg);
      case Command::Classify: return cmd_classify(cfg);
      case Command::ScenarioToy: return cmd_scenario_toy(cfg);
      case Command::ScenarioPeresTerno: return cmd_scenario_peres(cfg);
      case Command::ClosureProbe: return cmd_closure_probe(cfg);
    }
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << error_json(kExitConfig, "config", e.what()).dump() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << error_json(kExitIo, "io", e.what()).dump() << "\n";
    return kExitIo;
  } catch (const StepError& e) {
    std::cerr << error_json(kExitNumeric, "integrator", e.what()).dump() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << error_json(kExitNumeric, "numeric", e.what()).dump() << "\n";
    return kExitNumeric;
  }
}

}  // namespace hysim
