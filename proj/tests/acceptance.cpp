// acceptance.cpp — acceptance gate: one pinned criterion per invocation.
// Usage: acceptance <1..9>. Prints "CRITERION k: PASS|FAIL — details"; exit 0 iff pass.
// Tolerances are pinned here on purpose; a criterion that cannot be met by the
// implemented formulas fails honestly and prints the measured value.
#include <csp/dynamics.hpp>
#include <csp/experiments.hpp>
#include <csp/shooting.hpp>

#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace csp;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

std::string fmt(Real value, int digits = 6) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(digits) << value;
  return out.str();
}

Real rel_error(Complex measured, Complex reference) {
  return std::abs(measured - reference) / std::abs(reference);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VecN two_mode(Complex a, Complex b) {
  VecN z(2);
  z << a, b;
  return z;
}

// ---------------------------------------------------------------- criterion 1
// Harmonic exactness sweep: max |K_semi - K_exact| <= 1e-10 over the full label/time
// grid, both branches, in under 10 s.
Outcome criterion_1() {
  ExperimentConfig config;
  std::ostringstream log;
  const HoCheckReport report = run_ho_check(config, log);
  Outcome out;
  out.pass = report.pass() && report.runtime_seconds < 10.0;
  out.details = "max |K_semi - K_exact| = " + fmt(report.max_abs_error) +
                " (bound 1.0e-10) over " + std::to_string(report.cases) +
                " cases, runtime " + fmt(report.runtime_seconds, 2) + " s (limit 10 s)";
  return out;
}

// ---------------------------------------------------------------- criterion 2
// Branch conjugation: |K_-(z2,z1,T) - conj(K_+(z1,z2,T))| <= 1e-9 (harmonic) and
// <= 1e-7 (Kerr, Gamma*T <= 1) over 50 random cases.
Outcome criterion_2() {
  std::mt19937_64 rng(20260814ull);
  std::uniform_real_distribution<Real> radius(0.2, 0.9), phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<Real> omega_range(0.5, 2.0), omega_kerr(0.8, 1.2);
  std::uniform_real_distribution<Real> time_range(0.3, 3.0), gamma_t(0.05, 1.0);
  const auto draw = [&] { return std::polar(radius(rng), phase(rng)); };

  Real worst_harmonic = 0.0, worst_kerr = 0.0;
  std::string failure;
  for (int k = 0; k < 25 && failure.empty(); ++k) {
    const HamiltonianModel model = build_harmonic(omega_range(rng));
    VecN z1(1), z2(1);
    z1 << draw();
    z2 << draw();
    const Real T = time_range(rng);
    try {
      worst_harmonic = std::max(
          worst_harmonic, conjugation_check(model, CoherentLabel::isotropic(z1, 1.0),
                                            CoherentLabel::isotropic(z2, 1.0), T));
    } catch (const std::exception& error) {
      failure = std::string("harmonic case ") + std::to_string(k) + ": " + error.what();
    }
  }
  for (int k = 0; k < 25 && failure.empty(); ++k) {
    const Real wx = omega_kerr(rng), wy = omega_kerr(rng);
    const Real T = time_range(rng);
    const Real lambda = gamma_t(rng) / (T * wx * wy);  // Gamma*T drawn in [0.05, 1]
    const auto [model, kerr] = build_kerr_pair(wx, wy, lambda, 1.0);
    const VecN z1 = two_mode(draw(), draw());
    const VecN z2 = two_mode(draw(), draw());
    try {
      worst_kerr = std::max(
          worst_kerr, conjugation_check(model, CoherentLabel::isotropic(z1, 1.0),
                                        CoherentLabel::isotropic(z2, 1.0), T));
    } catch (const std::exception& error) {
      failure = std::string("kerr case ") + std::to_string(k) + ": " + error.what();
    }
  }

  Outcome out;
  if (!failure.empty()) {
    out.pass = false;
    out.details = "trajectory search failed on " + failure;
    return out;
  }
  out.pass = worst_harmonic <= 1e-9 && worst_kerr <= 1e-7;
  out.details = "max deviation harmonic = " + fmt(worst_harmonic) +
                " (bound 1.0e-09), kerr = " + fmt(worst_kerr) +
                " (bound 1.0e-07), 50 random cases";
  return out;
}

// ---------------------------------------------------------------- criterion 3
// The corner determinants of the numerically evolved tangent matrix match the printed
// closed forms to 1e-9 relative over 20 random (z0, Gamma, T) tuples with Gamma*T <= 1.
Outcome criterion_3() {
  std::mt19937_64 rng(3033ull);
  std::uniform_real_distribution<Real> radius(0.5, 1.1), phase(0.0, 6.283185307179586);
  std::uniform_real_distribution<Real> omega_range(0.8, 1.2), lambda_range(0.05, 0.3);
  std::uniform_real_distribution<Real> time_range(0.3, 2.0);

  Real worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Real wx = omega_range(rng), wy = omega_range(rng);
    const Real lambda = lambda_range(rng);
    const Real T = time_range(rng);
    const VecN z0 = two_mode(std::polar(radius(rng), phase(rng)),
                             std::polar(radius(rng), phase(rng)));
    const auto [model, kerr] = build_kerr_pair(wx, wy, lambda, 1.0);

    PhasePoint start;
    start.u = z0;
    start.v = z0.conjugate();
    EvolveOptions options;
    options.dt_max = 2e-4;
    options.store_samples = false;
    const TrajectoryRecord record = evolve(model, start, T, +1, options);
    const DeterminantForm form = purity_determinant_form(record.tangent);

    const oracles::KerrOracle oracle{wx, wy, lambda, 1.0};
    const auto printed = oracle.printed_determinants(z0, T);
    worst = std::max({worst, rel_error(form.det_Muu, printed.M_uu),
                      rel_error(form.det_Mvv, printed.M_vv), rel_error(form.det_A, printed.A),
                      rel_error(form.det_B, printed.B), rel_error(form.det_C, printed.C),
                      rel_error(form.det_D, printed.D), rel_error(form.det_Ap, printed.Ap),
                      rel_error(form.det_Bp, printed.Bp)});
  }

  Outcome out;
  out.pass = worst <= 1e-9;
  out.details = "max relative deviation of the eight corner determinants = " + fmt(worst) +
                " (bound 1.0e-09), 20 random tuples";
  return out;
}

// ---------------------------------------------------------------- criterion 4
// Short-time envelope: |P - (1 - 2x)| <= 5 x^2 for both the semiclassical pipeline and
// the exact oracle at x in {1e-5, 1e-4, 1e-3} and three initial labels, under 30 s.
// The measured quadratic remainders are ~6 x^2 (pipeline) and larger (exact), so this
// envelope cannot hold; the criterion fails honestly and prints both coefficients.
Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [model, kerr] = build_kerr_pair(1.0, 1.0, 0.1, 1.0);  // Gamma = 0.1
  const std::vector<VecN> labels = {
      two_mode(Complex{1.0, 0.0}, Complex{1.0, 0.0}),
      two_mode(Complex{0.8, 0.0}, Complex{1.1, 0.0}),
      two_mode(Complex{0.9, 0.4}, Complex{0.7, -0.2}),
  };

  Real worst_pipeline = 0.0, worst_exact = 0.0;
  for (const VecN& z0 : labels) {
    const Real mu = std::norm(z0[0]), nu = std::norm(z0[1]);
    for (const Real x : {1e-5, 1e-4, 1e-3}) {
      const Real T = std::sqrt(x / (mu * nu)) / kerr.Gamma();
      const Real P_pipeline =
          purity_semiclassical(model, kerr, CoherentLabel::isotropic(z0, 1.0), T).P;
      const Real P_exact = kerr_exact_purity_sum(z0[0], z0[1], kerr.Gamma(), T);
      const Real target = 1.0 - 2.0 * x;
      worst_pipeline = std::max(worst_pipeline, std::abs(P_pipeline - target) / (x * x));
      worst_exact = std::max(worst_exact, std::abs(P_exact - target) / (x * x));
    }
  }

  const double runtime = seconds_since(t0);
  Outcome out;
  out.pass = worst_pipeline <= 5.0 && worst_exact <= 5.0 && runtime < 30.0;
  out.details = "max |P - (1-2x)|/x^2: pipeline = " + fmt(worst_pipeline) +
                ", exact = " + fmt(worst_exact) +
                " (required <= 5); the measured quadratic remainders exceed the 5x^2 "
                "envelope; runtime " +
                fmt(runtime, 2) + " s (limit 30 s)";
  return out;
}

// ---------------------------------------------------------------- criterion 5
// Exact-oracle consistency: series-sum purity equals the reduced-density purity to 1e-8
// on a 10x10 (Gamma, T) grid; full recoherence at T = 2*pi/Gamma to 1e-8; and the pinned
// spot value P(z0 = (1,1), Gamma*T = pi) = 0.575586 to 1e-6. The spot leg fails
// honestly: the measured value is 0.5181479075747829.
Outcome criterion_5() {
  Real worst_grid = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Real Gamma = 0.05 * static_cast<Real>(i + 1);
    const KerrPairModel kerr{1.0, 1.0, Gamma, 1.0};  // hbar*wx*wy = 1 so lambda = Gamma
    for (int j = 0; j < 10; ++j) {
      const Real T = 0.2 + static_cast<Real>(j) * (4.8 / 9.0);
      const Real from_sum = kerr_exact_purity_sum(Complex{1.0, 0.0}, Complex{1.0, 0.0}, Gamma, T);
      const FockState evolved =
          evolve_kerr(coherent_pair_fock(Complex{1.0, 0.0}, Complex{1.0, 0.0}), kerr, T);
      worst_grid = std::max(worst_grid, std::abs(from_sum - reduced_purity(evolved)));
    }
  }

  const Real Gamma = 0.5;
  const Real recoherence = std::abs(
      kerr_exact_purity_sum(Complex{1.0, 0.0}, Complex{1.0, 0.0}, Gamma,
                            2.0 * 3.141592653589793 / Gamma) -
      1.0);

  const Real spot = kerr_exact_purity_sum(Complex{1.0, 0.0}, Complex{1.0, 0.0}, Gamma,
                                          3.141592653589793 / Gamma);
  const Real spot_dev = std::abs(spot - 0.575586);

  Outcome out;
  const bool grid_ok = worst_grid <= 1e-8;
  const bool reco_ok = recoherence <= 1e-8;
  const bool spot_ok = spot_dev <= 1e-6;
  out.pass = grid_ok && reco_ok && spot_ok;
  out.details = "sum-vs-reduced max = " + fmt(worst_grid) + " (bound 1.0e-08, " +
                (grid_ok ? "ok" : "violated") + "); recoherence deviation = " +
                fmt(recoherence) + " (bound 1.0e-08, " + (reco_ok ? "ok" : "violated") +
                "); spot value measured = " + fmt(spot, 16) +
                " vs pinned literal 5.755860e-01 (bound 1.0e-06, " +
                (spot_ok ? "ok" : "violated") + ")";
  return out;
}

// ---------------------------------------------------------------- criterion 6
// Decoupled pair: with no cross coupling the pipeline purity is 1 to 1e-12 for all T.
Outcome criterion_6() {
  const auto [model, kerr] = build_kerr_pair(1.2, 0.8, 0.0, 1.0);
  const VecN z0 = two_mode(Complex{0.9, 0.4}, Complex{-0.5, 0.7});
  const CoherentLabel label = CoherentLabel::isotropic(z0, 1.0);
  Real worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const Real T = 10.0 * static_cast<Real>(k) / 100.0;
    worst = std::max(worst, std::abs(purity_semiclassical(model, label, T).P - 1.0));
  }
  Outcome out;
  out.pass = worst <= 1e-12;
  out.details = "max |P - 1| = " + fmt(worst) + " (bound 1.0e-12) over 101 times in [0, 10]";
  return out;
}

// ---------------------------------------------------------------- criterion 7
// Saddle-point validity: the Gaussian quadrature cross-check of the purity integrals
// agrees with the closed forms to 1e-6 on the identity tangent, a weakly-coupled Kerr
// tangent (x = 0.01), and a synthetic tangent with off-diagonal coupling 0.15.
Outcome criterion_7() {
  std::vector<TangentMatrix> tangents;
  tangents.emplace_back(2);  // identity

  const auto [model, kerr] = build_kerr_pair(1.0, 1.0, 0.5, 1.0);  // Gamma = 0.5
  const VecN z0 = two_mode(Complex{1.0, 0.0}, Complex{1.0, 0.0});
  const Real T = 0.2;  // x = (Gamma*T)^2 = 0.01
  tangents.push_back(purity_semiclassical(model, kerr, CoherentLabel::isotropic(z0, 1.0), T).tangent);

  TangentMatrix synthetic(2);
  synthetic.full.topRightCorner(2, 2) = 0.15 * MatN::Identity(2, 2);
  synthetic.full.bottomLeftCorner(2, 2) = 0.15 * MatN::Identity(2, 2);
  tangents.push_back(synthetic);

  Real worst = 0.0;
  bool convergent = true;
  for (const TangentMatrix& tangent : tangents) {
    const SaddleCheckReport report = gaussian_saddle_check(tangent);
    convergent = convergent && report.convergent_trace && report.convergent_full;
    if (report.convergent_trace) worst = std::max(worst, report.resid_trace);
    if (report.convergent_full) worst = std::max(worst, report.resid_full);
  }

  Outcome out;
  out.pass = convergent && worst <= 1e-6;
  out.details = std::string("all quadratic forms convergent: ") +
                (convergent ? "yes" : "no") + ", max relative residual = " + fmt(worst) +
                " (bound 1.0e-06) on 3 tangent matrices";
  return out;
}

// ---------------------------------------------------------------- criterion 8
// Internal consistency: tangent vs finite differences <= 1e-6; boundary and time
// action-derivative identities <= 1e-5; relative energy drift <= 1e-10; unit tangent
// determinant to 1e-9; real-section reality preserved to 1e-10.
Outcome criterion_8() {
  const auto [model, kerr] = build_kerr_pair(1.1, 0.95, 0.08, 1.0);

  PhasePoint complex_start;
  complex_start.u = two_mode(Complex{0.4, 0.3}, Complex{-0.2, 0.5});
  complex_start.v = two_mode(Complex{0.1, -0.6}, Complex{0.7, 0.2});
  const Real T = 2.0;

  const Real fd = std::max(tangent_vs_finite_difference(model, complex_start, T, +1),
                           tangent_vs_finite_difference(model, complex_start, T, -1));

  const TrajectoryRecord record = evolve(model, complex_start, T, +1);
  const Real drift = record.max_energy_drift / std::max(1.0, std::abs(record.energy));
  const Real det_defect = record.tangent.determinant_defect();

  // Real-section reality along the whole trajectory.
  PhasePoint real_start;
  const VecN z0 = two_mode(Complex{0.9, 0.3}, Complex{-0.4, 0.6});
  real_start.u = z0;
  real_start.v = z0.conjugate();
  const TrajectoryRecord real_record = evolve(model, real_start, 1.2, +1);
  Real reality = 0.0;
  for (const TrajectorySample& sample : real_record.samples)
    reality = std::max(reality, (sample.v - sample.u.conjugate()).cwiseAbs().maxCoeff());

  // Action identities on a manufactured boundary problem whose solution is the real
  // trajectory above.
  BvpProblem problem;
  problem.model = &model;
  problem.z1 = z0;
  problem.z2_conj = real_record.v_end();
  problem.T = 1.2;
  problem.xi = +1;
  const std::vector<BvpSolution> solutions = solve(problem);
  const ActionIdentityReport identities = action_derivative_identities(problem, solutions.front());
  const ActionTimeDerivativeResult time_identity =
      action_time_derivative_check(model, solutions.front().trajectory);
  const Real action_residual = std::max(identities.max_rel_error(), time_identity.rel_residual);

  Outcome out;
  out.pass = fd <= 1e-6 && action_residual <= 1e-5 && drift <= 1e-10 && det_defect <= 1e-9 &&
             reality <= 1e-10;
  out.details = "tangent-vs-fd = " + fmt(fd) + " (1.0e-06); action identities = " +
                fmt(action_residual) + " (1.0e-05); relative energy drift = " + fmt(drift) +
                " (1.0e-10); det defect = " + fmt(det_defect) + " (1.0e-09); reality = " +
                fmt(reality) + " (1.0e-10)";
  return out;
}

// ---------------------------------------------------------------- criterion 9
// The CLI reports both purity variants and quantifies their divergence. Runs the real
// binary (CSPROP_BIN) on a small Kerr grid and inspects the CSV header and the log.
Outcome criterion_9() {
  Outcome out;
  const char* bin = std::getenv("CSPROP_BIN");
  if (bin == nullptr) {
    out.details = "CSPROP_BIN is not set; cannot exercise the binary";
    return out;
  }

  {
    std::ofstream config("acceptance9.cfg", std::ios::binary);
    config << "scenario = kerr\nlambda = 0.1\nT_start = 0\nT_stop = 1\nT_count = 6\n";
    if (!config.good()) {
      out.details = "cannot write acceptance9.cfg";
      return out;
    }
  }

  const std::string cmd = std::string("\"") + bin +
                          "\" --config acceptance9.cfg --out acceptance9.csv kerr-purity "
                          ">acceptance9.log 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    out.details = "kerr-purity invocation failed";
    return out;
  }

  std::ifstream csv("acceptance9.csv", std::ios::binary);
  std::string header;
  std::getline(csv, header);
  const bool has_columns = header.find("P_pipeline") != std::string::npos &&
                           header.find("P_printed") != std::string::npos;

  std::ifstream log_in("acceptance9.log", std::ios::binary);
  std::string line, divergence_line;
  while (std::getline(log_in, line))
    if (line.find("/x^3") != std::string::npos) divergence_line = line;

  out.pass = has_columns && !divergence_line.empty();
  out.details = has_columns
                    ? (divergence_line.empty()
                           ? "CSV columns present but no divergence summary in the log"
                           : "CSV reports P_pipeline and P_printed; log: " + divergence_line)
                    : "CSV header lacks the purity-variant columns";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1..9>\n";
    return 2;
  }
  const int which = std::atoi(argv[1]);
  Outcome outcome;
  switch (which) {
    case 1: outcome = criterion_1(); break;
    case 2: outcome = criterion_2(); break;
    case 3: outcome = criterion_3(); break;
    case 4: outcome = criterion_4(); break;
    case 5: outcome = criterion_5(); break;
    case 6: outcome = criterion_6(); break;
    case 7: outcome = criterion_7(); break;
    case 8: outcome = criterion_8(); break;
    case 9: outcome = criterion_9(); break;
    default:
      std::cerr << "usage: acceptance <criterion 1..9>\n";
      return 2;
  }
  std::cout << "CRITERION " << which << ": " << (outcome.pass ? "PASS" : "FAIL") << " — "
            << outcome.details << "\n";
  return outcome.pass ? 0 : 1;
}
