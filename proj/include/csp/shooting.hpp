// shooting.hpp — Newton shooting for the two-point boundary problem of the propagator
#pragma once

#include <csp/dynamics.hpp>

#include <optional>
#include <string>
#include <vector>

namespace csp {

// Boundary data on the generalized-time axis. For ξ=+1, u(0)=z1 is fixed and v(0) is the
// free value iterated so that v(T)=z2_conj; for ξ=−1, v(0)=z2_conj is fixed and u(0) is
// iterated so that u(T)=z1.
struct BvpProblem {
  const HamiltonianModel* model = nullptr;
  VecN z1;
  VecN z2_conj;
  Real T = 0.0;
  int xi = +1;
  std::vector<VecN> initial_guesses;  // guesses for the free initial value; may be empty
  EvolveOptions evolve_options;

  void validate() const;
  int n_modes() const { return static_cast<int>(z1.size()); }
};

struct BvpSolution {
  TrajectoryRecord trajectory;
  Real residual = 0.0;   // |v(T) − z2_conj| (ξ=+1) or |u(T) − z1| (ξ=−1), L2
  int iterations = 0;
  VecN guess_used;       // the starting guess that produced this solution
  VecN free_initial;     // converged free initial value (v(0) for ξ=+1, u(0) for ξ=−1)
};

enum class BvpFailureReason { max_iterations, escape, focal_point, stalled };

struct BvpFailure {
  VecN guess;
  BvpFailureReason reason;
  Real best_residual;
  std::string message;
};

// Zeroth-order free-end value: z2_conj for ξ=+1 (free v(0)), z1 for ξ=−1 (free u(0)).
VecN default_guess(const BvpProblem& problem);

// Multi-start damped Newton using the tangent block (M_vv for ξ=+1, M_uu for ξ=−1) as
// Jacobian. Converged solutions are deduplicated (free initial values closer than 1e-8)
// and sorted by residual, then lexicographically by free initial value, so the output
// order is reproducible. Throws SolveFailure when no guess converges; per-guess failures
// are appended to `failures` when provided.
std::vector<BvpSolution> solve(const BvpProblem& problem, Real tol = 1e-10, int max_iter = 50,
                               std::vector<BvpFailure>* failures = nullptr);

// Residuals of the boundary action-derivative identities for one converged solution:
// ξ=+1: u(T) = (i/ħ) ∂S/∂z2_conj and v(0) = (i/ħ) ∂S/∂z1,
// ξ=−1: u(0) = (i/ħ) ∂S/∂z2_conj and v(T) = (i/ħ) ∂S/∂z1.
// Derivatives are central differences over re-solved problems (step 1e-6).
struct ActionIdentityReport {
  Real max_rel_error_z2;  // worst mode of the ∂S/∂z2_conj identity
  Real max_rel_error_z1;  // worst mode of the ∂S/∂z1 identity
  Real max_rel_error() const { return std::max(max_rel_error_z2, max_rel_error_z1); }
};
ActionIdentityReport action_derivative_identities(const BvpProblem& problem,
                                                  const BvpSolution& solution, Real step = 1e-6);

// Checks det[(i/ħ) ∂²S/∂z2_conj ∂z1] = 1/det(M_vv) (ξ=+1) or 1/det(M_uu) (ξ=−1) by a
// mixed central difference of S over re-solved problems. Returns the relative error.
Real prefactor_consistency_check(const BvpProblem& problem, const BvpSolution& solution,
                                 Real step = 1e-4);

// Verifies ∂S_ξ/∂T = −ξ H by re-solving the boundary problem (same z1, z2_conj) at T ± δ
// and central-differencing S. The record must carry samples (to recover boundary data).
struct ActionTimeDerivativeResult {
  Complex numeric_dS_dT;
  Complex expected;  // −ξ H
  Real abs_residual;
  Real rel_residual;  // abs residual / max(1, |expected|)
};
ActionTimeDerivativeResult action_time_derivative_check(const HamiltonianModel& model,
                                                        const TrajectoryRecord& record,
                                                        Real delta = 1e-5);

}  // namespace csp
