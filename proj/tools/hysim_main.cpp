// Command-line front end: parse arguments into a RunConfig and dispatch.

#include <string>

#include "CLI11.hpp"
#include "hysim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hysim - quantum-classical hybrid dynamics in phase space"};
  app.require_subcommand(1);

  hysim::RunConfig rc;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool have_seed = false;

  auto add_io = [&](CLI::App* sub, bool config_opt, bool out_opt) {
    if (config_opt) {
      sub->add_option("-c,--config", config_path, "configuration file (sectioned key=value)");
    }
    if (out_opt) sub->add_option("-o,--out", out_dir, "output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { seed = s; have_seed = true; },
        "override the configured random seed");
  };
  auto add_dims = [&](CLI::App* sub) {
    sub->add_option("-n,--n", rc.n_cl, "classical degrees of freedom")->required();
    sub->add_option("-N,--N", rc.n_qm, "quantum modes")->required();
  };

  auto* simulate = app.add_subcommand("simulate", "propagate a single hybrid trajectory");
  add_io(simulate, true, true);

  auto* ensemble = app.add_subcommand("ensemble", "sample and transport a hybrid ensemble");
  add_io(ensemble, true, true);

  auto* bracket = app.add_subcommand("bracket", "Poisson bracket of two polynomial observables");
  add_dims(bracket);
  bracket->add_option("--kind", rc.bracket_kind, "hybrid (default), cl, or qm");
  bracket->add_option("exprs", rc.expressions, "two polynomial expressions")->expected(2);
  add_io(bracket, false, true);

  auto* classify = app.add_subcommand("classify", "classify a polynomial observable");
  add_dims(classify);
  classify->add_option("expr", rc.expressions, "polynomial expression")->expected(1);
  add_io(classify, false, true);

  auto* toy = app.add_subcommand("scenario-toy", "pointer measurement model");
  add_io(toy, true, true);

  auto* peres =
      app.add_subcommand("scenario-peres-terno", "bilinearly coupled oscillator benchmark");
  add_io(peres, true, true);

  auto* closure = app.add_subcommand("closure-probe", "iterated hybrid brackets and classes");
  add_dims(closure);
  closure->add_option("--depth", rc.depth, "nesting depth (default 3)");
  closure->add_option("exprs", rc.expressions, "two polynomial expressions")->expected(2);
  add_io(closure, false, true);

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) rc.command = hysim::Command::Simulate;
  if (ensemble->parsed()) rc.command = hysim::Command::Ensemble;
  if (bracket->parsed()) rc.command = hysim::Command::Bracket;
  if (classify->parsed()) rc.command = hysim::Command::Classify;
  if (toy->parsed()) rc.command = hysim::Command::ScenarioToy;
  if (peres->parsed()) rc.command = hysim::Command::ScenarioPeresTerno;
  if (closure->parsed()) rc.command = hysim::Command::ClosureProbe;

  if (!config_path.empty()) rc.config_path = config_path;
  if (!out_dir.empty()) rc.out_dir = out_dir;
  if (have_seed) rc.seed_override = seed;

  return hysim::dispatch(rc);
}
