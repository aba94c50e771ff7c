// oracles.hpp — independent closed-form references for the test suite.
// Everything here is evaluated directly from analytic formulas, never through the
// library's integrator or solver, so tests compare two independent computation paths.
#pragma once

#include <Eigen/Dense>

#include <csp/types.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using csp::Complex;
using csp::kImag;
using csp::Mat2N;
using csp::MatN;
using csp::Real;
using csp::VecN;

// ----------------------------------------------------------------- harmonic
// H = ħω(vu + 1/2), one mode. On the generalized time axis u(t) = u0 e^{−iωt},
// v(t) = v0 e^{+iωt} for both ξ; the tangent matrix is diag(e^{−iωT}, e^{+iωT}).
struct HarmonicOracle {
  Real omega = 1.0;
  Real hbar = 1.0;

  Complex M_uu(Real T) const { return std::exp(-kImag * omega * T); }
  Complex M_vv(Real T) const { return std::exp(+kImag * omega * T); }

  // For the solved boundary problem (z1, z2*): S_ξ = −ħωξT/2 − iħ z1 z2* e^{−iωξT}.
  Complex action_S(Complex z1, Complex z2_conj, Real T, int xi) const {
    const Real s = static_cast<Real>(xi);
    return Complex{-hbar * omega * s * T / 2.0, 0.0} -
           kImag * hbar * z1 * z2_conj * std::exp(-kImag * omega * s * T);
  }

  // Λ_ξ = iħ z1 z2* e^{−iωξT} for the solved problem.
  Complex boundary_Lambda(Complex z1, Complex z2_conj, Real T, int xi) const {
    return kImag * hbar * z1 * z2_conj * std::exp(-kImag * omega * static_cast<Real>(xi) * T);
  }

  // G_ξ = ξħωT/2.
  Complex correction_G(Real T, int xi) const {
    return Complex{static_cast<Real>(xi) * hbar * omega * T / 2.0, 0.0};
  }

  // K_ξ = e^{−iωξT/2} exp(−|z1|²/2 − |z2|²/2 + z1 z2* e^{−iωξT}); exact for all T.
  Complex propagator(Complex z1, Complex z2, Real T, int xi) const {
    const Real s = static_cast<Real>(xi);
    const Complex z2_conj = std::conj(z2);
    return std::exp(-kImag * omega * s * T / 2.0) *
           std::exp(-0.5 * std::norm(z1) - 0.5 * std::norm(z2) +
                    z1 * z2_conj * std::exp(-kImag * omega * s * T));
  }
};

// --------------------------------------------------------------------- Kerr
// H = ħΩ_x v_x u_x + ħΩ_y v_y u_y + ħΓ v_x u_x v_y u_y + ε₀ with Γ = λħω_xω_y,
// Ω_r = ω_r + Γ/2, ε₀ = ħ(ω_x+ω_y)/2. The products n_r = u_r v_r are conserved, so
//   u_r(t) = u_r(0) e^{−λ_r t},  v_r(t) = v_r(0) e^{+λ_r t},
//   λ_x = i(Ω_x + Γ n_y),        λ_y = i(Ω_y + Γ n_x),
// and the tangent matrix factorizes as M = M₂ M₁ with a = iΓT.
struct KerrOracle {
  Real omega_x = 1.0;
  Real omega_y = 1.0;
  Real lambda = 0.0;
  Real hbar = 1.0;

  Real Gamma() const { return lambda * hbar * omega_x * omega_y; }
  Real Omega_x() const { return omega_x + Gamma() / 2.0; }
  Real Omega_y() const { return omega_y + Gamma() / 2.0; }
  Real epsilon0() const { return hbar * (omega_x + omega_y) / 2.0; }

  Complex lambda_x(const VecN& u0, const VecN& v0) const {
    return kImag * (Omega_x() + Gamma() * u0[1] * v0[1]);
  }
  Complex lambda_y(const VecN& u0, const VecN& v0) const {
    return kImag * (Omega_y() + Gamma() * u0[0] * v0[0]);
  }

  void trajectory(const VecN& u0, const VecN& v0, Real t, VecN& u, VecN& v) const {
    const Complex lx = lambda_x(u0, v0), ly = lambda_y(u0, v0);
    u.resize(2);
    v.resize(2);
    u[0] = u0[0] * std::exp(-lx * t);
    u[1] = u0[1] * std::exp(-ly * t);
    v[0] = v0[0] * std::exp(+lx * t);
    v[1] = v0[1] * std::exp(+ly * t);
  }

  // Tangent matrix in the basis (u_x, u_y, v_x, v_y).
  Mat2N tangent(const VecN& u0, const VecN& v0, Real T) const {
    const Complex a = kImag * Gamma() * T;
    const Complex ux = u0[0], uy = u0[1], vx = v0[0], vy = v0[1];
    Mat2N M1(4, 4), M2(4, 4);
    M1.setZero();
    M1(0, 0) = 1.0;
    M1(0, 1) = -a * ux * vy;
    M1(0, 3) = -a * ux * uy;
    M1(1, 0) = -a * uy * vx;
    M1(1, 1) = 1.0;
    M1(1, 2) = -a * uy * ux;
    M1(2, 1) = a * vx * vy;
    M1(2, 2) = 1.0;
    M1(2, 3) = a * vx * uy;
    M1(3, 0) = a * vy * vx;
    M1(3, 2) = a * vy * ux;
    M1(3, 3) = 1.0;
    const Complex lx = lambda_x(u0, v0), ly = lambda_y(u0, v0);
    M2.setZero();
    M2(0, 0) = std::exp(-lx * T);
    M2(1, 1) = std::exp(-ly * T);
    M2(2, 2) = std::exp(+lx * T);
    M2(3, 3) = std::exp(+ly * T);
    return M2 * M1;
  }

  // Action pieces on the generalized axis, for a trajectory with invariants
  // n_r = u_r(0) v_r(0):
  //   S_ξ = ξT(ħΓ n_x n_y − ε₀) − iħ(n_x + n_y)
  //   G_ξ = (ξT/2)[ħ(Ω_x + Ω_y) + ħΓ(n_x + n_y)]
  Complex action_S(const VecN& u0, const VecN& v0, Real T, int xi) const {
    const Complex nx = u0[0] * v0[0], ny = u0[1] * v0[1];
    return static_cast<Real>(xi) * T * (hbar * Gamma() * nx * ny - epsilon0()) -
           kImag * hbar * (nx + ny);
  }
  Complex correction_G(const VecN& u0, const VecN& v0, Real T, int xi) const {
    const Complex nx = u0[0] * v0[0], ny = u0[1] * v0[1];
    return (static_cast<Real>(xi) * T / 2.0) *
           (hbar * (Omega_x() + Omega_y()) + hbar * Gamma() * (nx + ny));
  }

  // Printed closed forms of the block determinants for the real trajectory
  // u(0) = z0, v(0) = conj(z0), with a = iΓT:
  //   det M̃_uu = e^{−(λx+λy)T}(1 − a²|z0x|²|z0y|²)   det M̃_vv = its e^{+...} twin
  //   det Ã  = a²|z0x|²(z0y*)² e^{−(λx−λy)T}          det B̃  = a²|z0x|²(z0y)² e^{+(λx−λy)T}
  //   det C̃  = a²(z0x*)²|z0y|² e^{+(λx−λy)T}          det D̃  = a²(z0x)²|z0y|² e^{−(λx−λy)T}
  //   det Ã′ = a z0x* z0y*                             det B̃′ = −a z0x z0y
  struct PrintedDets {
    Complex M_uu, M_vv, A, B, C, D, Ap, Bp;
  };
  PrintedDets printed_determinants(const VecN& z0, Real T) const {
    const VecN v0 = z0.conjugate();
    const Complex a = kImag * Gamma() * T;
    const Complex lx = lambda_x(z0, v0), ly = lambda_y(z0, v0);
    const Real nx = std::norm(z0[0]), ny = std::norm(z0[1]);
    PrintedDets d;
    d.M_uu = std::exp(-(lx + ly) * T) * (1.0 - a * a * nx * ny);
    d.M_vv = std::exp(+(lx + ly) * T) * (1.0 - a * a * nx * ny);
    d.A = a * a * nx * std::conj(z0[1]) * std::conj(z0[1]) * std::exp(-(lx - ly) * T);
    d.B = a * a * nx * z0[1] * z0[1] * std::exp(+(lx - ly) * T);
    d.C = a * a * std::conj(z0[0]) * std::conj(z0[0]) * ny * std::exp(+(lx - ly) * T);
    d.D = a * a * z0[0] * z0[0] * ny * std::exp(-(lx - ly) * T);
    d.Ap = a * std::conj(z0[0]) * std::conj(z0[1]);
    d.Bp = -a * z0[0] * z0[1];
    return d;
  }

  // Exact purity of the reduced state, double sum over Poisson weights of |z0x|².
  Real exact_purity(Complex z0x, Complex z0y, Real T, int terms = 160) const {
    const Real mu = std::norm(z0x), nu = std::norm(z0y);
    long double total = 0.0L;
    std::vector<long double> p(static_cast<std::size_t>(terms));
    p[0] = std::exp(static_cast<long double>(-mu));
    for (int n = 1; n < terms; ++n)
      p[static_cast<std::size_t>(n)] =
          p[static_cast<std::size_t>(n - 1)] * mu / static_cast<long double>(n);
    for (int n = 0; n < terms; ++n)
      for (int m = 0; m < terms; ++m) {
        const long double s = std::sin(static_cast<long double>(Gamma()) * T * (n - m) / 2.0L);
        total += p[static_cast<std::size_t>(n)] * p[static_cast<std::size_t>(m)] *
                 std::exp(-4.0L * nu * s * s);
      }
    return static_cast<Real>(total);
  }
};

// Semiclassical Kerr purity closed forms in x = |z0x|²|z0y|²Γ²T²:
inline Real kerr_purity_pipeline_closed(Real x) { return 1.0 / std::sqrt(1.0 + 4.0 * x); }
inline Real kerr_purity_printed_closed(Real x) {
  return (1.0 + x) / std::sqrt(1.0 + 6.0 * x + x * x * (3.0 + 2.0 * x) * (3.0 + 2.0 * x));
}
// Literal determinant-recipe value for the real Kerr trajectory:
// P_det = (1+x)² / sqrt((1+2x)⁴ − 4x²(1+x)⁴).
inline Real kerr_purity_determinant_recipe(Real x) {
  const Real e = std::pow(1.0 + 2.0 * x, 4) - 4.0 * x * x * std::pow(1.0 + x, 4);
  return (1.0 + x) * (1.0 + x) / std::sqrt(e);
}

}  // namespace oracles
