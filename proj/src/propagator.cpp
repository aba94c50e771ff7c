// propagator.cpp — prefactor branch tracking and contribution assembly
#include <csp/propagator.hpp>

#include <csp/phase_tracking.hpp>

#include <cmath>

namespace csp {

namespace {

void check_labels(const HamiltonianModel& model, const CoherentLabel& label1,
                  const CoherentLabel& label2) {
  label1.validate();
  label2.validate();
  if (label1.n_modes() != model.n_modes() || label2.n_modes() != model.n_modes())
    throw std::invalid_argument("propagate: label mode count does not match the model");
  const Real h = model.hbar();
  if (std::abs(label1.hbar - h) > 1e-12 * h || std::abs(label2.hbar - h) > 1e-12 * h)
    throw std::invalid_argument("propagate: labels and model must share hbar");
  if ((label1.b - label2.b).cwiseAbs().maxCoeff() > 1e-12 ||
      (label1.c - label2.c).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("propagate: labels must share widths per mode");
}

}  // namespace

PropagatorValue propagate(const HamiltonianModel& model, const CoherentLabel& label1,
                          const CoherentLabel& label2, Real T, int xi,
                          const std::vector<VecN>& guesses, const EvolveOptions& options,
                          Real bvp_tol, int bvp_max_iter) {
  check_labels(model, label1, label2);

  BvpProblem problem;
  problem.model = &model;
  problem.z1 = label1.z;
  problem.z2_conj = label2.z.conjugate();
  problem.T = T;
  problem.xi = xi;
  problem.initial_guesses = guesses;
  problem.evolve_options = options;
  problem.evolve_options.store_samples = false;
  problem.evolve_options.observer = nullptr;
  problem.evolve_options.record_block_dets = true;

  const std::vector<BvpSolution> solutions = solve(problem, bvp_tol, bvp_max_iter);

  const Real log_norm = -0.5 * (label1.norm2() + label2.norm2());
  const Complex i_over_hbar = kImag / model.hbar();

  PropagatorValue result;
  result.amplitude = Complex{0.0, 0.0};
  result.contributions.reserve(solutions.size());

  for (const auto& sol : solutions) {
    // feed the per-step prefactor determinants recorded during the solve into the
    // phase tracker, so the branch is followed continuously without re-integrating
    PhaseTracker tracker;
    const std::vector<Complex>& dets =
        (xi == +1) ? sol.trajectory.det_vv_steps : sol.trajectory.det_uu_steps;
    for (const Complex& det : dets) tracker.update(det);

    PropagatorContribution c;
    c.prefactor = tracker.inverse_sqrt();
    c.branch_index = tracker.branch_index();
    c.action_S = sol.trajectory.action_S;
    c.correction_G = sol.trajectory.correction_G;
    c.residual = sol.residual;
    c.free_initial = sol.free_initial;
    c.value = c.prefactor * std::exp(i_over_hbar * (c.action_S + c.correction_G) + log_norm);
    result.contributions.push_back(std::move(c));
    result.amplitude += result.contributions.back().value;
  }
  return result;
}

Complex exact_ho_propagator(Real omega, const CoherentLabel& label1, const CoherentLabel& label2,
                            Real T, int xi) {
  if (label1.n_modes() != 1 || label2.n_modes() != 1)
    throw std::invalid_argument("exact_ho_propagator: one mode only");
  if (xi != 1 && xi != -1) throw std::invalid_argument("exact_ho_propagator: xi must be +1 or -1");
  const Real phase = omega * static_cast<Real>(xi) * T;
  const Complex rotation = std::exp(Complex{0.0, -phase});
  const Complex z1 = label1.z[0];
  const Complex z2c = std::conj(label2.z[0]);
  return std::exp(Complex{0.0, -phase / 2.0}) *
         std::exp(-0.5 * (label1.norm2() + label2.norm2()) + z1 * z2c * rotation);
}

Real conjugation_check(const HamiltonianModel& model, const CoherentLabel& label1,
                       const CoherentLabel& label2, Real T, const EvolveOptions& options) {
  const PropagatorValue minus = propagate(model, label1, label2, T, -1, {}, options);
  const PropagatorValue plus = propagate(model, label2, label1, T, +1, {}, options);
  return std::abs(minus.amplitude - std::conj(plus.amplitude));
}

}  // namespace csp
