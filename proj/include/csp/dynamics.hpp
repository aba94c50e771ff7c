// dynamics.hpp — complexified Hamilton equations with tangent matrix and action integrals
#pragma once

#include <csp/hamiltonian.hpp>
#include <csp/types.hpp>

#include <functional>
#include <vector>

namespace csp {

// Linearized flow M mapping (δu(0), δv(0)) to (δu(t), δv(t)); blocks are n×n.
// det M = 1 for all t (the variational generator is traceless).
struct TangentMatrix {
  Mat2N full;  // 2n×2n, row/col order (u_1..u_n, v_1..v_n)

  explicit TangentMatrix(int n_modes = 1) : full(Mat2N::Identity(2 * n_modes, 2 * n_modes)) {}
  explicit TangentMatrix(Mat2N m) : full(std::move(m)) {}

  int n_modes() const { return static_cast<int>(full.rows()) / 2; }
  MatN uu() const { return full.topLeftCorner(n_modes(), n_modes()); }
  MatN uv() const { return full.topRightCorner(n_modes(), n_modes()); }
  MatN vu() const { return full.bottomLeftCorner(n_modes(), n_modes()); }
  MatN vv() const { return full.bottomRightCorner(n_modes(), n_modes()); }

  // |det(full) − 1|; zero for exact symplectic-like flow
  Real determinant_defect() const { return std::abs(full.determinant() - Complex{1.0, 0.0}); }
};

// One integrator sample on the generalized-time axis.
struct TrajectorySample {
  Real t;
  VecN u;
  VecN v;
};

// Result of evolve(): the trajectory on the generalized-time axis together with the
// accumulated action S_ξ, boundary term Λ_ξ, correction G_ξ, and final tangent matrix.
struct TrajectoryRecord {
  int xi = +1;
  Real T = 0.0;
  std::vector<TrajectorySample> samples;  // present when options.store_samples
  Complex energy;                         // H at t = 0 (conserved)
  Real max_energy_drift = 0.0;            // max_t |H(t) − H(0)|
  Complex action_S;                       // S_ξ = ξ ∫ [(iħ/2)(u̇v − uv̇) − H] dt − Λ_ξ
  Complex boundary_Lambda;                // Λ_ξ = (iħ/2)(u″·v″ + u′·v′)
  Complex correction_G;                   // G_ξ = (ξ/2) ∫ tr H_uv dt
  TangentMatrix tangent;
  long step_count = 0;
  // Per-step determinants of the uu and vv tangent blocks (step_count + 1 entries,
  // starting with 1 at t = 0); filled when options.record_block_dets, so square-root
  // branches can be tracked continuously without re-integrating.
  std::vector<Complex> det_uu_steps, det_vv_steps;

  const VecN& u_start() const { return samples.front().u; }
  const VecN& v_start() const { return samples.front().v; }
  const VecN& u_end() const { return samples.back().u; }
  const VecN& v_end() const { return samples.back().v; }
};

// Called after every accepted step (and once at t = 0) with the current state and tangent.
using StepObserver =
    std::function<void(Real t, const VecN& u, const VecN& v, const Mat2N& tangent)>;

struct EvolveOptions {
  Real dt_max = 1e-3;        // fixed step dt = T/ceil(T/dt_max)
  Real escape_bound = 1e6;   // throw EscapeError when any |u_r| or |v_r| exceeds this
  long max_steps = 10'000'000;
  bool store_samples = true;
  bool record_block_dets = false;  // keep det M_uu(t), det M_vv(t) per step in the record
  StepObserver observer;     // optional per-step callback
};

// Integrates du/dt = −(i/ħ) ∂H/∂v, dv/dt = +(i/ħ) ∂H/∂u on the generalized-time axis
// from (start.u, start.v) at t = 0 to t = T with classical RK4, propagating the tangent
// matrix and accumulating the S and G integrands within the same RK4 stages.
// ξ enters only the final assembly of S_ξ and G_ξ; the axis dynamics are ξ-independent.
TrajectoryRecord evolve(const HamiltonianModel& model, const PhasePoint& start, Real T, int xi,
                        const EvolveOptions& options = {});

// Central-difference check of the tangent matrix: perturb each of the 2n start components
// by ±eps, re-evolve, compare against the corresponding column of M. Returns the max
// entrywise error |M_ij − FD_ij| / max(1, |M_ij|).
Real tangent_vs_finite_difference(const HamiltonianModel& model, const PhasePoint& start, Real T,
                                  int xi, const EvolveOptions& options = {}, Real eps = 1e-6);

}  // namespace csp
