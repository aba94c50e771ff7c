// types.hpp — scalar/vector aliases and the coherent-state / phase-space value types
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace csp {

using Real = double;
using Complex = std::complex<Real>;

// Systems have 1 or 2 modes; fixed-capacity dynamic types keep hot loops allocation-free.
constexpr int kMaxModes = 2;

using VecN = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxModes, 1>;
using MatN = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxModes, kMaxModes>;
using Vec2N = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 2 * kMaxModes, 1>;
using Mat2N =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxModes, 2 * kMaxModes>;
using RealVecN = Eigen::Matrix<Real, Eigen::Dynamic, 1, 0, kMaxModes, 1>;

inline constexpr Complex kImag{0.0, 1.0};

// Plain bilinear pairing Σ_r a_r b_r (no conjugation; the complexified flow is holomorphic).
inline Complex dot_bilinear(const VecN& a, const VecN& b) {
  return (a.array() * b.array()).sum();
}

// CoherentLabel — complex amplitude z per mode plus the Gaussian widths (b, c) defining
// the (q,p) <-> (u,v) map. Invariant: b_r > 0, c_r > 0, b_r * c_r = hbar per mode.
struct CoherentLabel {
  VecN z;
  RealVecN b;
  RealVecN c;
  Real hbar = 1.0;

  CoherentLabel() = default;
  CoherentLabel(VecN z_in, RealVecN b_in, RealVecN c_in, Real hbar_in)
      : z(std::move(z_in)), b(std::move(b_in)), c(std::move(c_in)), hbar(hbar_in) {
    validate();
  }

  // Widths defaulting to b = c = sqrt(hbar) (unit-mass, unit-frequency convention).
  static CoherentLabel isotropic(VecN z_in, Real hbar_in = 1.0) {
    const auto n = z_in.size();
    RealVecN w = RealVecN::Constant(n, std::sqrt(hbar_in));
    return CoherentLabel(std::move(z_in), w, w, hbar_in);
  }

  int n_modes() const { return static_cast<int>(z.size()); }

  // Σ_r |z_r|^2
  Real norm2() const { return z.squaredNorm(); }

  void validate() const {
    if (!(hbar > 0.0)) throw std::invalid_argument("CoherentLabel: hbar must be positive");
    const auto n = z.size();
    if (n < 1 || n > kMaxModes)
      throw std::invalid_argument("CoherentLabel: number of modes must be 1 or 2");
    if (b.size() != n || c.size() != n)
      throw std::invalid_argument("CoherentLabel: width vectors must match mode count");
    for (Eigen::Index r = 0; r < n; ++r) {
      if (!(b[r] > 0.0) || !(c[r] > 0.0))
        throw std::invalid_argument("CoherentLabel: widths must be positive");
      if (std::abs(b[r] * c[r] - hbar) > 1e-12 * hbar)
        throw std::invalid_argument("CoherentLabel: widths must satisfy b*c = hbar (mode " +
                                    std::to_string(r) + ")");
    }
    if (!z.allFinite()) throw std::invalid_argument("CoherentLabel: amplitudes must be finite");
  }
};

// PhasePoint — point (u, v) of the complexified phase space; u and v are independent
// complex coordinates. The real section is v = conj(u).
struct PhasePoint {
  VecN u;
  VecN v;

  PhasePoint() = default;
  PhasePoint(VecN u_in, VecN v_in) : u(std::move(u_in)), v(std::move(v_in)) { validate(); }

  int n_modes() const { return static_cast<int>(u.size()); }

  void validate() const {
    if (u.size() != v.size())
      throw std::invalid_argument("PhasePoint: u and v must have equal length");
    if (u.size() < 1 || u.size() > kMaxModes)
      throw std::invalid_argument("PhasePoint: number of modes must be 1 or 2");
    if (!u.allFinite() || !v.allFinite())
      throw std::invalid_argument("PhasePoint: components must be finite");
  }

  // Max deviation from the real section v = conj(u).
  Real reality_defect() const { return (v - u.conjugate()).cwiseAbs().maxCoeff(); }
};

// Trajectory escape (complexified flows can blow up in finite time).
struct EscapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A tangent-block determinant vanished where the formalism needs its inverse square root.
struct FocalPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No Newton guess converged to the requested boundary data.
struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& msg, Real best) : std::runtime_error(msg), best_residual(best) {}
  Real best_residual;
};

}  // namespace csp
