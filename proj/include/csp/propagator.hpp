// propagator.hpp — assembly of the semiclassical coherent-state propagator K_ξ(z2*, z1, T)
#pragma once

#include <csp/shooting.hpp>

namespace csp {

// One trajectory's term: prefactor · exp[(i/ħ)(S+G)] · exp(−|z1|²/2 − |z2|²/2).
struct PropagatorContribution {
  Complex value;
  Complex prefactor;     // (det M_vv)^{−1/2} for ξ=+1, (det M_uu)^{−1/2} for ξ=−1,
                         // branch continued in t from +1 at t=0
  int branch_index = 0;  // winding count of the tracked determinant
  Complex action_S;
  Complex correction_G;
  Real residual = 0.0;   // boundary residual of the underlying trajectory
  VecN free_initial;     // converged free initial value
};

struct PropagatorValue {
  Complex amplitude;  // sum of contributions
  std::vector<PropagatorContribution> contributions;
};

// Semiclassical propagator from label1 (initial, enters as z1) to label2 (final, enters
// as z2*). Labels must agree with the model in mode count and hbar, and with each other
// in widths. Guesses seed the trajectory search; empty means the default guess.
PropagatorValue propagate(const HamiltonianModel& model, const CoherentLabel& label1,
                          const CoherentLabel& label2, Real T, int xi,
                          const std::vector<VecN>& guesses = {},
                          const EvolveOptions& options = {}, Real bvp_tol = 1e-10,
                          int bvp_max_iter = 50);

// Closed form for the harmonic oscillator (one mode):
// K_ξ = e^{−iωξT/2} exp(−|z1|²/2 − |z2|²/2 + z1·conj(z2)·e^{−iωξT}).
Complex exact_ho_propagator(Real omega, const CoherentLabel& label1, const CoherentLabel& label2,
                            Real T, int xi);

// Deviation |K_−(z2, z1, T) − conj(K_+(z1, z2, T))| computed semiclassically on both sides.
Real conjugation_check(const HamiltonianModel& model, const CoherentLabel& label1,
                       const CoherentLabel& label2, Real T, const EvolveOptions& options = {});

}  // namespace csp
