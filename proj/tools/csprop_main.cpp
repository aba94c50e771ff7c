// csprop_main.cpp — command-line interface: ho-check, kerr-purity, bvp-solve,
// propagator, property-suite
#include <CLI11.hpp>

#include <csp/csv.hpp>
#include <csp/experiments.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using csp::Complex;
using csp::ExperimentConfig;

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    values.push_back(csp::parse_complex(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

struct GlobalArgs {
  std::string config_path;
  std::string out;
  int threads = -1;
  long seed = -1;
};

ExperimentConfig load_config(const GlobalArgs& args) {
  ExperimentConfig config;
  if (!args.config_path.empty()) config = csp::parse_config_file(args.config_path);
  csp::apply_env_overrides(config);
  if (!args.out.empty()) {
    config.out = args.out;
    config.keys_set.push_back("out");
  }
  if (args.threads >= 0) {
    config.threads = args.threads;
    config.keys_set.push_back("threads");
  }
  if (args.seed >= 0) {
    config.seed = static_cast<unsigned long>(args.seed);
    config.keys_set.push_back("seed");
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "csprop — semiclassical coherent-state propagators and entanglement purity\n"
      "Computes complex classical trajectories, the associated propagator, and the\n"
      "semiclassical purity of Kerr-coupled oscillator pairs, validated against an\n"
      "exact truncated-Fock-space reference."};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "configuration file (key = value per line)")
      ->envname("CSPROP_CONFIG");
  app.add_option("--out", args.out, "output CSV path (default: stdout)")
      ->envname("CSPROP_OUT");
  app.add_option("--threads", args.threads, "worker threads (0 = hardware concurrency)")
      ->envname("CSPROP_THREADS");
  app.add_option("--seed", args.seed, "seed for randomized checks")->envname("CSPROP_SEED");
  app.footer(csp::config_key_help());

  auto* ho = app.add_subcommand(
      "ho-check", "harmonic-oscillator exactness sweep: max |K_semi - K_exact| over a "
                  "grid of coherent labels, 33 times in omega*T <= 4pi, both xi");
  ho->fallthrough();

  auto* kerr = app.add_subcommand(
      "kerr-purity", "Kerr purity curves: semiclassical pipeline, printed closed form, "
                     "exact oracle, over the configured time grid");
  kerr->fallthrough();

  auto* prop = app.add_subcommand(
      "propagator", "semiclassical propagator along the time grid with the exact "
                    "reference column when the scenario has an oracle");
  prop->fallthrough();
  int prop_xi = +1;
  prop->add_option("--xi", prop_xi, "propagation branch, +1 or -1")
      ->check(CLI::IsMember({1, -1}));

  auto* bvp = app.add_subcommand(
      "bvp-solve", "solve the two-point boundary problem for one (z1, z2, T, xi)");
  bvp->fallthrough();
  std::string bvp_z1, bvp_z2;
  double bvp_T = -1.0;
  int bvp_xi = +1;
  std::vector<std::string> bvp_guesses;
  double bvp_tol = -1.0;
  int bvp_max_iter = -1;
  bvp->add_option("--z1", bvp_z1, "initial coherent label, comma-separated complex list");
  bvp->add_option("--z2", bvp_z2, "final coherent label, comma-separated complex list");
  bvp->add_option("--T", bvp_T, "propagation time");
  bvp->add_option("--xi", bvp_xi, "branch, +1 or -1")->check(CLI::IsMember({1, -1}));
  bvp->add_option("--guess", bvp_guesses,
                  "initial guess for the free end, comma-separated complex list (repeatable)");
  bvp->add_option("--tol", bvp_tol, "boundary-residual tolerance");
  bvp->add_option("--max-iter", bvp_max_iter, "Newton iteration limit");

  auto* suite = app.add_subcommand("property-suite",
                                   "run every library invariant check; exit 0 iff all pass");
  suite->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig config = load_config(args);

    if (ho->parsed()) {
      csp::HoCheckReport report;
      if (!config.out.empty()) {
        csp::OutputTarget target(config.out);
        report = csp::run_ho_check(config, std::cout, &target.stream());
        target.finish();
      } else {
        report = csp::run_ho_check(config, std::cout, nullptr);
      }
      return report.pass() ? 0 : 1;
    }

    if (kerr->parsed()) {
      csp::OutputTarget target(config.out);
      std::ostream& log = config.out.empty() ? std::cerr : std::cout;
      csp::run_kerr_purity(config, target.stream(), log);
      target.finish();
      return 0;
    }

    if (prop->parsed()) {
      csp::OutputTarget target(config.out);
      std::ostream& log = config.out.empty() ? std::cerr : std::cout;
      csp::run_propagator(config, prop_xi, target.stream(), log);
      target.finish();
      return 0;
    }

    if (bvp->parsed()) {
      csp::BvpSolveRequest request;
      const csp::HamiltonianModel model = csp::build_scenario_model(config);
      const int n = model.n_modes();
      if (!bvp_z1.empty()) {
        request.z1 = parse_complex_list(bvp_z1);
      } else {
        request.z1 = {config.z1_x};
        if (n == 2) request.z1.push_back(config.z1_y);
      }
      if (!bvp_z2.empty()) {
        request.z2 = parse_complex_list(bvp_z2);
      } else {
        request.z2 = {config.z2_x};
        if (n == 2) request.z2.push_back(config.z2_y);
      }
      request.T = (bvp_T >= 0.0) ? bvp_T : config.T;
      request.xi = bvp_xi;
      for (const auto& g : bvp_guesses) request.guesses.push_back(parse_complex_list(g));
      request.tol = (bvp_tol > 0.0) ? bvp_tol : config.bvp_tol;
      request.max_iter = (bvp_max_iter > 0) ? bvp_max_iter : config.bvp_max_iter;

      int converged = 0;
      if (!config.out.empty()) {
        csp::OutputTarget target(config.out);
        converged = csp::run_bvp_solve(config, request, std::cout, &target.stream());
        target.finish();
      } else {
        converged = csp::run_bvp_solve(config, request, std::cout, nullptr);
      }
      return converged > 0 ? 0 : 1;
    }

    if (suite->parsed()) {
      std::ostringstream buffer;
      const csp::PropertySuiteReport report = csp::run_property_suite(config, buffer);
      std::cout << buffer.str();
      if (!config.out.empty()) {
        std::ofstream file(config.out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open '" + config.out + "'");
        file << buffer.str();
      }
      return report.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& error) {
    std::cerr << "csprop: error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
