#include "qips/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum exit_code { ok = 0, validation = 2, violation = 3 };

struct Options {
  int sites = 2;
  std::string dk;
  std::string local;
  std::string mode = "float";
  double tol = 1e-9;
  std::string json_path;
  std::string component = "all";
  std::uint64_t seed = 1;
  int max_sites = qips::default_max_sites;
  unsigned threads = 0;
  bool numeric = false;
  std::vector<double> s_samples;
  std::string step = "1/2";
  int steps = 10;
  int samples = 100000;
  std::string init;
  int walk_steps = 1000;
};

qips::ModelSpec to_spec(const Options& o) {
  qips::ModelSpec spec;
  spec.sites = o.sites;
  if (o.dk.empty() == o.local.empty()) throw qips::io::input_error("give exactly one of --dk and --local");
  if (!o.dk.empty()) {
    spec.source = qips::ModelSpec::Source::dk;
    std::tie(spec.p, spec.q) = qips::parse_dk_pair(o.dk);
  } else {
    spec.source = qips::ModelSpec::Source::local;
    spec.local_path = o.local;
  }
  if (o.mode == "exact")
    spec.mode = qips::Mode::exact;
  else if (o.mode == "float")
    spec.mode = qips::Mode::floating;
  else
    throw qips::io::input_error("--mode must be exact or float");
  spec.tol = o.tol;
  spec.max_sites = o.max_sites;
  if (o.component == "all")
    spec.component = 0;
  else if (o.component == "1" || o.component == "2")
    spec.component = o.component[0] - '0';
  else
    throw qips::io::input_error("--component must be 1, 2 or all");
  spec.threads = o.threads;
  return spec;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.sites, "number of sites N");
  cmd->add_option("--dk", o.dk, "Domany-Kinzel parameters p,q (decimals or fractions)");
  cmd->add_option("--local", o.local, "JSON file with a 4x4 local operator");
  cmd->add_option("--mode", o.mode, "exact or float")->capture_default_str();
  cmd->add_option("--tol", o.tol, "identity tolerance")->capture_default_str();
  cmd->add_option("--component", o.component, "1, 2 or all")->capture_default_str();
  cmd->add_option("--max-sites", o.max_sites, "cap on N")->capture_default_str();
}

int emit(const qips::CommandResult& result, const Options& o) {
  const std::string text = result.document.dump(2);
  std::cout << text << '\n';
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) throw qips::io::input_error("cannot write " + o.json_path);
    out << text << '\n';
  }
  if (!result.all_hold()) {
    for (const auto& c : result.checks)
      if (!c.holds) std::cerr << "identity violated (" << c.scope << "): " << c.name << " gap " << c.value << '\n';
    return violation;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domany-Kinzel PCA blocks, their quantum walks and zeta functions"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--json", o.json_path, "also write the JSON report to PATH");
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads (0: hardware concurrency)");

  auto* model = app.add_subcommand("model", "global operator blocks and classification");
  auto* quantize = app.add_subcommand("quantize", "Markov chains and their quantizations U");
  auto* zeta = app.add_subcommand("zeta", "zeta reciprocals det(I - uU) and their factorization");
  auto* abszeta = app.add_subcommand("abszeta", "automorphy, cyclotomic form and absolute zeta");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sampling and quantum walk evolution");
  auto* scan = app.add_subcommand("scan", "(p,q) grid scan for cyclotomic forms");
  for (auto* cmd : {model, quantize, zeta, abszeta, simulate}) add_model_flags(cmd, o);
  abszeta->add_flag("--numeric", o.numeric, "evaluate gamma/sine factors, Mellin integral and functional equation");
  abszeta->add_option("--s", o.s_samples, "sample points for the functional equation");
  simulate->add_option("--steps", o.steps, "trajectory length for site densities")->capture_default_str();
  simulate->add_option("--samples", o.samples, "single-step samples per initial state")->capture_default_str();
  simulate->add_option("--init", o.init, "initial configuration, e.g. 10 (default: all)");
  simulate->add_option("--walk-steps", o.walk_steps, "quantum walk steps")->capture_default_str();
  scan->add_option("--step", o.step, "grid step in (0, 1]")->capture_default_str();
  scan->add_option("--n", o.sites, "number of sites N")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return validation;
  }

  try {
    if (*scan) {
      const qips::Rational step = qips::parse_rational(o.step);
      return emit(qips::cmd_scan(step, o.sites, o.threads), o);
    }
    const qips::ModelSpec spec = to_spec(o);
    if (*model) return emit(qips::cmd_model(spec), o);
    if (*quantize) return emit(qips::cmd_quantize(spec), o);
    if (*zeta) return emit(qips::cmd_zeta(spec), o);
    if (*abszeta) return emit(qips::cmd_abszeta(spec, {o.numeric, o.s_samples}), o);
    qips::SimulateOptions sim;
    sim.steps = o.steps;
    sim.samples = o.samples;
    sim.seed = o.seed;
    if (!o.init.empty()) sim.init = o.init;
    sim.walk_steps = o.walk_steps;
    return emit(qips::cmd_simulate(spec, sim), o);
  } catch (const qips::identity_violation& e) {
    std::cerr << "identity violated: " << e.what() << '\n';
    return violation;
  } catch (const qips::structure_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return validation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return validation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return validation;
  }
}
