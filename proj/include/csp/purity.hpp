// purity.hpp — semiclassical purity of a bipartite system from one real trajectory
#pragma once

#include <csp/dynamics.hpp>
#include <csp/hamiltonian.hpp>

namespace csp {

// Saddle-point factors derived from a two-mode tangent matrix.
// a = M_vu·M_uu⁻¹ and b = M_uv·M_vv⁻¹ are symmetric (they are action Hessians).
struct SaddleFactors {
  MatN a;            // 2×2
  MatN b;            // 2×2
  Complex det_uu, det_vv;
  Complex D;         // 1/D = 1 − a_yy·b_yy
  Complex A_a, A_b;  // a_xx, b_xx
  Complex C_a, C_b, C_c;
  Complex q_trace;   // 1 − a_yy·b_yy (argument of the trace-integral root)
  Complex q_full;    // [1−(A_a+C_a)(A_b+C_b)]² − 2C_c²[1+(A_a+C_a)(A_b+C_b)] + C_c⁴
};
SaddleFactors saddle_factors(const Mat2N& tangent_full);

// Everything purity_semiclassical computes, including the final tangent matrix.
struct PurityBreakdown {
  MatN a_matrix;     // M_vu·M_uu⁻¹ at time T
  MatN b_matrix;     // M_uv·M_vv⁻¹ at time T
  Complex D;
  Complex A_a, A_b, C_a, C_b, C_c;
  Complex I_factor;  // q_full^{−1/2}, branch tracked continuously from +1 at T=0
  Complex R_tilde;   // (det M_uu)^{−1/2}(det M_vv)^{−1/2} q_trace^{−1/2}, each root tracked
  Complex det_Muu, det_Mvv;
  Real P = 1.0;           // Re(I_factor · R_tilde²)
  Real S_lin = 0.0;       // 1 − P
  Real x_parameter = 0.0; // |z_x|²|z_y|²Γ²T² (NaN unless the Kerr overload is used)
  Real imag_residue = 0.0;
  TangentMatrix tangent;  // final tangent matrix of the real trajectory
};

// Evolves the single real trajectory u(0) = z0, v(0) = conj(z0) (ξ = +1) and assembles
// P = I_factor · R_tilde² with every square root branch tracked continuously in T from
// its value +1 at T = 0. Throws FocalPointError when a tracked determinant vanishes, and
// a runtime error when |Im P| > 1e-6 (pipeline inconsistency); |Im P| ≤ 1e-9 is expected
// roundoff and silently discarded (the value is always recorded in imag_residue).
PurityBreakdown purity_semiclassical(const HamiltonianModel& model, const CoherentLabel& z0,
                                     Real T, const EvolveOptions& options = {});

// Same, for a Kerr pair: fills x_parameter = |z_x|²|z_y|²Γ²T².
PurityBreakdown purity_semiclassical(const HamiltonianModel& model, const KerrPairModel& kerr,
                                     const CoherentLabel& z0, Real T,
                                     const EvolveOptions& options = {});

// The printed determinant recipe (reporting only, non-authoritative): corner blocks of the
// row-permuted tangent matrix, rows (1,4,3,2) for (Ã D̃; C̃ B̃) and rows (1,3,2,4) for
// (Ã′ D̃′; C̃′ B̃′), combined literally into Ẽ′, Ẽ″, Ẽ and P = Ẽ^{−1/2}·det M_uu·det M_vv.
// The Ẽ expression is evaluated exactly as printed (its +Ẽ″ … −Ẽ″ cancels); the square
// root uses the principal branch.
struct DeterminantForm {
  Complex det_A, det_B, det_C, det_D;
  Complex det_Ap, det_Bp;
  Complex det_Muu, det_Mvv;
  Complex E, E_prime, E_dprime;
  Complex P_value;  // Ẽ^{−1/2}·det M_uu·det M_vv, principal root
  Real P_det = 1.0; // Re(P_value)
};
DeterminantForm purity_determinant_form(const TangentMatrix& tangent);

// Closed forms of the Kerr purity at x = |z_x|²|z_y|²Γ²T²: the published compact formula
// and the symbolic reduction of the pipeline on the analytic Kerr tangent blocks. They
// agree through O(x²) and differ at O(x³); both tend to 1 − 2x as x → 0.
struct KerrClosedForm {
  Real x;
  Real P_printed;   // (1+x)/sqrt(1+6x+x²(3+2x)²)
  Real P_pipeline;  // 1/sqrt(1+4x)
};
KerrClosedForm kerr_closed_form(const VecN& z0, Real Gamma, Real T);

// Quadrature cross-check of the two Gaussian factors behind the purity:
//   trace factor  (1 − a_yy b_yy)^{−1/2}   — 2 real dimensions,
//   full factor   q_full^{−1/2}            — 4 real dimensions,
// both via tensor-product Gauss–Hermite rules with n_quad points per axis against the
// principal-branch closed forms. A factor whose real residual quadratic form has an
// eigenvalue ≥ 1 makes the integral divergent; it is reported as nonconvergent.
struct SaddleCheckReport {
  bool convergent_trace = false;
  bool convergent_full = false;
  Real resid_trace = 0.0;  // relative deviation, quadrature vs closed form
  Real resid_full = 0.0;
  Complex trace_quadrature, trace_closed;
  Complex full_quadrature, full_closed;
};
SaddleCheckReport gaussian_saddle_check(const TangentMatrix& tangent, int n_quad = 64);

inline Real linear_entropy(Real P) { return 1.0 - P; }

}  // namespace csp
