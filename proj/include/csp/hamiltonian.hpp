// hamiltonian.hpp — normal-ordered polynomial Hamiltonians H(v,u) with exact derivatives
#pragma once

#include <csp/types.hpp>

#include <array>
#include <vector>

namespace csp {

// One monomial coeff * Π_r v_r^{m_r} u_r^{n_r}. Exponents beyond n_modes must be zero.
struct Monomial {
  Complex coeff{0.0, 0.0};
  std::array<int, kMaxModes> m{0, 0};  // powers of v per mode
  std::array<int, kMaxModes> n{0, 0};  // powers of u per mode
};

// All first/second partials of H at a point, computed in one pass over the monomials.
struct HamiltonianDerivatives {
  Complex value;
  VecN grad_u, grad_v;          // ∂H/∂u_r, ∂H/∂v_r
  MatN h_uu, h_uv, h_vu, h_vv;  // (h_ab)_{rs} = ∂²H / ∂a_r ∂b_s
};

// Immutable polynomial Hamiltonian. Safe to share across threads.
class HamiltonianModel {
 public:
  static constexpr int kMaxDegree = 8;

  HamiltonianModel(int n_modes, Real hbar, std::vector<Monomial> monomials);

  int n_modes() const { return n_modes_; }
  Real hbar() const { return hbar_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  Complex eval(const PhasePoint& p) const;
  Complex eval(const VecN& u, const VecN& v) const;

  // grad_u[r] = ∂H/∂u_r, grad_v[r] = ∂H/∂v_r
  void gradient(const VecN& u, const VecN& v, VecN& grad_u, VecN& grad_v) const;

  void hessian(const VecN& u, const VecN& v, MatN& h_uu, MatN& h_uv, MatN& h_vu,
               MatN& h_vv) const;

  // Value + gradient + hessian in a single monomial sweep (integrator hot path).
  void derivatives(const VecN& u, const VecN& v, HamiltonianDerivatives& out) const;

  void check_mode_count(const PhasePoint& p) const;
  void check_mode_count(const VecN& u, const VecN& v) const;

 private:
  int n_modes_;
  Real hbar_;
  std::vector<Monomial> monomials_;
};

// True when every monomial has a partner with (m,n) swapped and conjugated coefficient,
// which makes H(conj(u), u) real for every u.
bool hermiticity_check(const HamiltonianModel& model, Real tol = 1e-12);

// H = hbar*omega*(v u + 1/2), one mode.
HamiltonianModel build_harmonic(Real omega, Real hbar = 1.0);

// Two Kerr-coupled oscillators. Frequencies and coupling fix the derived constants below.
struct KerrPairModel {
  Real omega_x = 1.0;
  Real omega_y = 1.0;
  Real lambda = 0.0;  // coupling, units 1/energy
  Real hbar = 1.0;

  Real Gamma() const { return lambda * hbar * omega_x * omega_y; }
  Real Omega_x() const { return omega_x + Gamma() / 2.0; }
  Real Omega_y() const { return omega_y + Gamma() / 2.0; }
  Real epsilon0() const { return hbar * (omega_x + omega_y) / 2.0; }

  // x = |z_x|^2 |z_y|^2 Γ² T², the dimensionless interaction strength at time T.
  Real x_parameter(const VecN& z0, Real T) const;
};

// H = ħΩ_x v_x u_x + ħΩ_y v_y u_y + ħΓ v_x u_x v_y u_y + ε₀, two modes.
std::pair<HamiltonianModel, KerrPairModel> build_kerr_pair(Real omega_x, Real omega_y, Real lambda,
                                                           Real hbar = 1.0);

// u = (q/b + i p/c)/√2, v = (q/b − i p/c)/√2 per mode. Real (q,p) give v = conj(u).
PhasePoint phase_to_uv(const RealVecN& q, const RealVecN& p, const CoherentLabel& label);

// Inverse map: q = b (u+v)/√2, p = −i c (u−v)/√2 (complex-valued off the real section).
void uv_to_phase(const PhasePoint& point, const CoherentLabel& label, VecN& q, VecN& p);

}  // namespace csp
