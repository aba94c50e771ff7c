// fock.hpp — exact truncated-Fock-space reference: coherent states, Kerr evolution, purity
#pragma once

#include <csp/hamiltonian.hpp>
#include <csp/types.hpp>

namespace csp {

using FockVector = Eigen::VectorXcd;  // one mode, index n = 0..N_cut
using FockMatrix = Eigen::MatrixXcd;  // two modes, entry (n, m)

// Smallest cutoff with Poisson tail below `tail` for amplitude z, plus a margin of 5.
int coherent_cutoff(Complex z, Real tail = 1e-12, int margin = 5);

// Two-mode pure state ψ_{nm} with a shared per-mode cutoff N_cut.
struct FockState {
  FockMatrix amplitudes;  // (N_cut+1) × (N_cut+1)
  int N_cut = 0;

  Real norm() const { return amplitudes.norm(); }
};

// One-mode coherent amplitudes e^{−|z|²/2} zⁿ/√n!, renormalized after truncation.
// Throws when the truncation tail beyond N_cut is ≥ 1e-12 in probability.
FockVector coherent_fock(Complex z, int N_cut);

// Product state |z_x⟩⊗|z_y⟩. N_cut ≤ 0 selects the automatic cutoff (max over modes).
FockState coherent_pair_fock(Complex zx, Complex zy, int N_cut = 0);

// Diagonal Kerr evolution: ψ_{nm} ← ψ_{nm} e^{−i(Ω_x n + Ω_y m + Γ n m + ε₀/ħ)T}.
FockState evolve_kerr(const FockState& state, const KerrPairModel& kerr, Real T);

// ρ_x = Tr_y |ψ⟩⟨ψ| with validation hooks.
struct ReducedDensity {
  FockMatrix matrix;

  Real hermiticity_defect() const;  // max |ρ − ρ†|
  Real trace_defect() const;        // |tr ρ − 1|
  Real min_eigenvalue() const;
  // throws unless hermitian to 1e-12, trace 1 ± 1e-10, eigenvalues ≥ −1e-10
  void validate() const;
};
ReducedDensity reduced_density(const FockState& state);

// Tr ρ_x² of the mode-x reduced density matrix.
Real reduced_purity(const FockState& state);

// Closed-form double sum for the Kerr purity:
// P_T = e^{−2|z_x|²} Σ_{n,m} |z_x|^{2(n+m)}/(n!m!) · e^{−4|z_y|² sin²(ΓT(n−m)/2)}.
// N_cut ≤ 0 selects the automatic cutoff for z_x.
Real kerr_exact_purity_sum(Complex z0x, Complex z0y, Real Gamma, Real T, int N_cut = 0);

// Short-time law 1 − 2x with x = |z_x|²|z_y|²Γ²T².
Real short_time_purity(const VecN& z0, Real Gamma, Real T);

// Exact Kerr propagator ⟨z₂| e^{−iĤT/ħ} |z₁⟩ via the diagonal Fock evolution.
Complex kerr_exact_propagator(const KerrPairModel& kerr, const CoherentLabel& label1,
                              const CoherentLabel& label2, Real T, int N_cut = 0);

}  // namespace csp
