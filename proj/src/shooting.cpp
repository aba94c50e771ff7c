// shooting.cpp — damped multi-start Newton on the free initial value
#include <csp/shooting.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace csp {

namespace {

PhasePoint assemble_start(const BvpProblem& p, const VecN& free_value) {
  return (p.xi == +1) ? PhasePoint(p.z1, free_value) : PhasePoint(free_value, p.z2_conj);
}

VecN residual_of(const BvpProblem& p, const TrajectoryRecord& rec) {
  return (p.xi == +1) ? VecN(rec.v_end() - p.z2_conj) : VecN(rec.u_end() - p.z1);
}

MatN jacobian_block(const BvpProblem& p, const TrajectoryRecord& rec) {
  return (p.xi == +1) ? rec.tangent.vv() : rec.tangent.uu();
}

bool lex_less(const VecN& a, const VecN& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

struct NewtonOutcome {
  std::optional<BvpSolution> solution;
  BvpFailureReason reason = BvpFailureReason::max_iterations;
  Real best_residual = std::numeric_limits<Real>::infinity();
  std::string message;
};

NewtonOutcome newton_from_guess(const BvpProblem& p, const VecN& guess, Real tol, int max_iter) {
  EvolveOptions quiet = p.evolve_options;
  quiet.store_samples = false;
  quiet.observer = nullptr;

  NewtonOutcome out;
  VecN free_value = guess;

  TrajectoryRecord rec;
  try {
    rec = evolve(*p.model, assemble_start(p, free_value), p.T, p.xi, quiet);
  } catch (const EscapeError& e) {
    out.reason = BvpFailureReason::escape;
    out.message = e.what();
    return out;
  }
  VecN res = residual_of(p, rec);
  Real res_norm = res.norm();
  out.best_residual = res_norm;

  for (int iter = 0; iter <= max_iter; ++iter) {
    if (res_norm <= tol) {
      BvpSolution sol;
      if (!p.evolve_options.store_samples && p.evolve_options.observer == nullptr) {
        // rec was produced with options identical to the caller's; no need to re-run
        sol.trajectory = std::move(rec);
      } else {
        sol.trajectory = evolve(*p.model, assemble_start(p, free_value), p.T, p.xi,
                                p.evolve_options);
      }
      sol.residual = res_norm;
      sol.iterations = iter;
      sol.guess_used = guess;
      sol.free_initial = free_value;
      out.solution = std::move(sol);
      return out;
    }
    if (iter == max_iter) break;

    const MatN J = jacobian_block(p, rec);
    if (std::abs(J.determinant()) < 1e-14) {
      out.reason = BvpFailureReason::focal_point;
      out.message = "singular shooting Jacobian (focal point)";
      return out;
    }
    const VecN full_step = J.partialPivLu().solve(-res);

    // damped update: halve the step until the residual decreases
    bool improved = false;
    Real scale = 1.0;
    for (int halving = 0; halving <= 20; ++halving, scale *= 0.5) {
      const VecN trial = free_value + scale * full_step;
      TrajectoryRecord trial_rec;
      try {
        trial_rec = evolve(*p.model, assemble_start(p, trial), p.T, p.xi, quiet);
      } catch (const EscapeError&) {
        continue;  // shorter step may stay in bounds
      }
      const VecN trial_res = residual_of(p, trial_rec);
      const Real trial_norm = trial_res.norm();
      if (trial_norm < res_norm || trial_norm <= tol) {
        free_value = trial;
        rec = std::move(trial_rec);
        res = trial_res;
        res_norm = trial_norm;
        improved = true;
        break;
      }
    }
    out.best_residual = std::min(out.best_residual, res_norm);
    if (!improved) {
      out.reason = BvpFailureReason::stalled;
      out.message = "Newton step failed to reduce the residual after 20 halvings";
      return out;
    }
  }
  out.reason = BvpFailureReason::max_iterations;
  out.message = "no convergence within max_iter";
  return out;
}

}  // namespace

void BvpProblem::validate() const {
  if (model == nullptr) throw std::invalid_argument("BvpProblem: model is required");
  if (xi != 1 && xi != -1) throw std::invalid_argument("BvpProblem: xi must be +1 or -1");
  if (!(T >= 0.0)) throw std::invalid_argument("BvpProblem: T must be nonnegative");
  if (z1.size() != model->n_modes() || z2_conj.size() != model->n_modes())
    throw std::invalid_argument("BvpProblem: boundary data mode count mismatch");
  if (!z1.allFinite() || !z2_conj.allFinite())
    throw std::invalid_argument("BvpProblem: boundary data must be finite");
  for (const auto& g : initial_guesses)
    if (g.size() != z1.size())
      throw std::invalid_argument("BvpProblem: guess mode count mismatch");
}

VecN default_guess(const BvpProblem& problem) {
  return (problem.xi == +1) ? problem.z2_conj : problem.z1;
}

std::vector<BvpSolution> solve(const BvpProblem& problem, Real tol, int max_iter,
                               std::vector<BvpFailure>* failures) {
  problem.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");

  std::vector<VecN> guesses = problem.initial_guesses;
  if (guesses.empty()) guesses.push_back(default_guess(problem));

  std::vector<BvpSolution> solutions;
  Real best_failed_residual = std::numeric_limits<Real>::infinity();
  for (const auto& guess : guesses) {
    NewtonOutcome outcome = newton_from_guess(problem, guess, tol, max_iter);
    if (outcome.solution) {
      solutions.push_back(std::move(*outcome.solution));
    } else {
      best_failed_residual = std::min(best_failed_residual, outcome.best_residual);
      if (failures)
        failures->push_back({guess, outcome.reason, outcome.best_residual, outcome.message});
    }
  }

  if (solutions.empty())
    throw SolveFailure("solve: no guess converged (best residual " +
                           std::to_string(best_failed_residual) + ")",
                       best_failed_residual);

  // deduplicate free initial values closer than 1e-8 (keep the smaller residual)
  std::sort(solutions.begin(), solutions.end(), [](const BvpSolution& a, const BvpSolution& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return lex_less(a.free_initial, b.free_initial);
  });
  std::vector<BvpSolution> unique;
  for (auto& sol : solutions) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const BvpSolution& kept) {
      return (kept.free_initial - sol.free_initial).cwiseAbs().maxCoeff() < 1e-8;
    });
    if (!dup) unique.push_back(std::move(sol));
  }
  return unique;
}

namespace {

// S of the re-solved problem with perturbed boundary data, warm-started from `warm`.
Complex resolved_action(const BvpProblem& base, const VecN& z1, const VecN& z2_conj, Real T,
                        const VecN& warm) {
  BvpProblem p = base;
  p.z1 = z1;
  p.z2_conj = z2_conj;
  p.T = T;
  p.initial_guesses = {warm};
  const auto sols = solve(p, 1e-12, 50);
  return sols.front().trajectory.action_S;
}

}  // namespace

ActionIdentityReport action_derivative_identities(const BvpProblem& problem,
                                                  const BvpSolution& solution, Real step) {
  problem.validate();
  const int n = problem.n_modes();
  const Complex i_over_hbar = kImag / problem.model->hbar();
  const TrajectoryRecord& rec = solution.trajectory;

  // values the identities must reproduce
  const VecN lhs_z2 = (problem.xi == +1) ? rec.u_end() : rec.u_start();   // (i/ħ) ∂S/∂z2*
  const VecN lhs_z1 = (problem.xi == +1) ? rec.v_start() : rec.v_end();   // (i/ħ) ∂S/∂z1

  ActionIdentityReport report{0.0, 0.0};
  for (int r = 0; r < n; ++r) {
    VecN z2p = problem.z2_conj, z2m = problem.z2_conj;
    z2p[r] += step;
    z2m[r] -= step;
    const Complex dS_dz2 = (resolved_action(problem, problem.z1, z2p, problem.T, solution.free_initial) -
                            resolved_action(problem, problem.z1, z2m, problem.T, solution.free_initial)) /
                           (2.0 * step);
    const Complex pred2 = i_over_hbar * dS_dz2;
    report.max_rel_error_z2 =
        std::max(report.max_rel_error_z2,
                 std::abs(pred2 - lhs_z2[r]) / std::max(1.0, std::abs(lhs_z2[r])));

    VecN z1p = problem.z1, z1m = problem.z1;
    z1p[r] += step;
    z1m[r] -= step;
    const Complex dS_dz1 = (resolved_action(problem, z1p, problem.z2_conj, problem.T, solution.free_initial) -
                            resolved_action(problem, z1m, problem.z2_conj, problem.T, solution.free_initial)) /
                           (2.0 * step);
    const Complex pred1 = i_over_hbar * dS_dz1;
    report.max_rel_error_z1 =
        std::max(report.max_rel_error_z1,
                 std::abs(pred1 - lhs_z1[r]) / std::max(1.0, std::abs(lhs_z1[r])));
  }
  return report;
}

Real prefactor_consistency_check(const BvpProblem& problem, const BvpSolution& solution,
                                 Real step) {
  problem.validate();
  const int n = problem.n_modes();
  const Complex i_over_hbar = kImag / problem.model->hbar();

  MatN mixed(n, n);  // mixed(r, s) = ∂²S / ∂z2_conj_r ∂z1_s
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      auto S_at = [&](Real sign2, Real sign1) {
        VecN z2 = problem.z2_conj, z1 = problem.z1;
        z2[r] += sign2 * step;
        z1[s] += sign1 * step;
        return resolved_action(problem, z1, z2, problem.T, solution.free_initial);
      };
      mixed(r, s) =
          (S_at(+1, +1) - S_at(+1, -1) - S_at(-1, +1) + S_at(-1, -1)) / (4.0 * step * step);
    }

  const Complex lhs = (i_over_hbar * mixed).determinant();
  const MatN block = (problem.xi == +1) ? solution.trajectory.tangent.vv()
                                        : solution.trajectory.tangent.uu();
  const Complex rhs = Complex{1.0, 0.0} / block.determinant();
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

ActionTimeDerivativeResult action_time_derivative_check(const HamiltonianModel& model,
                                                        const TrajectoryRecord& record,
                                                        Real delta) {
  if (record.samples.size() < 1)
    throw std::invalid_argument("action_time_derivative_check: record has no samples");
  if (record.T <= delta)
    throw std::invalid_argument("action_time_derivative_check: T must exceed delta");

  BvpProblem p;
  p.model = &model;
  p.xi = record.xi;
  p.T = record.T;
  if (record.xi == +1) {
    p.z1 = record.u_start();
    p.z2_conj = record.v_end();
  } else {
    p.z1 = record.u_end();
    p.z2_conj = record.v_start();
  }
  const VecN warm = (record.xi == +1) ? record.v_start() : record.u_start();

  const Complex S_plus = resolved_action(p, p.z1, p.z2_conj, record.T + delta, warm);
  const Complex S_minus = resolved_action(p, p.z1, p.z2_conj, record.T - delta, warm);

  ActionTimeDerivativeResult out;
  out.numeric_dS_dT = (S_plus - S_minus) / (2.0 * delta);
  out.expected = -static_cast<Real>(record.xi) * record.energy;
  out.abs_residual = std::abs(out.numeric_dS_dT - out.expected);
  out.rel_residual = out.abs_residual / std::max(1.0, std::abs(out.expected));
  return out;
}

}  // namespace csp
