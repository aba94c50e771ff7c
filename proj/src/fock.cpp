// fock.cpp — truncated Fock-space preparation, diagonal Kerr evolution, purity
#include <csp/fock.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace csp {

namespace {
constexpr Real kTailBound = 1e-12;
constexpr int kHardCutoffLimit = 4096;
}  // namespace

int coherent_cutoff(Complex z, Real tail, int margin) {
  const Real mu = std::norm(z);
  Real p = std::exp(-mu);  // Poisson weight p_0
  Real cumulative = p;
  int N = 0;
  while (1.0 - cumulative >= tail) {
    ++N;
    if (N > kHardCutoffLimit)
      throw std::invalid_argument("coherent_cutoff: amplitude too large for a safe truncation");
    p *= mu / static_cast<Real>(N);
    cumulative += p;
  }
  return N + margin;
}

FockVector coherent_fock(Complex z, int N_cut) {
  if (N_cut < 0) throw std::invalid_argument("coherent_fock: N_cut must be nonnegative");
  FockVector c(N_cut + 1);
  c[0] = std::exp(-0.5 * std::norm(z));
  for (int n = 1; n <= N_cut; ++n) c[n] = c[n - 1] * z / std::sqrt(static_cast<Real>(n));
  const Real captured = c.squaredNorm();
  if (1.0 - captured >= kTailBound)
    throw std::invalid_argument("coherent_fock: insufficient cutoff (truncation tail " +
                                std::to_string(1.0 - captured) + ")");
  c /= std::sqrt(captured);
  return c;
}

FockState coherent_pair_fock(Complex zx, Complex zy, int N_cut) {
  if (N_cut <= 0) N_cut = std::max(coherent_cutoff(zx), coherent_cutoff(zy));
  FockState state;
  state.N_cut = N_cut;
  const FockVector cx = coherent_fock(zx, N_cut);
  const FockVector cy = coherent_fock(zy, N_cut);
  state.amplitudes = cx * cy.transpose();
  return state;
}

FockState evolve_kerr(const FockState& state, const KerrPairModel& kerr, Real T) {
  const int N = state.N_cut;
  if (state.amplitudes.rows() != N + 1 || state.amplitudes.cols() != N + 1)
    throw std::invalid_argument("evolve_kerr: inconsistent state dimensions");
  FockState out;
  out.N_cut = N;
  out.amplitudes.resize(N + 1, N + 1);
  const Real eps_over_hbar = kerr.epsilon0() / kerr.hbar;
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) {
      const Real phase = (kerr.Omega_x() * n + kerr.Omega_y() * m +
                          kerr.Gamma() * static_cast<Real>(n) * static_cast<Real>(m) +
                          eps_over_hbar) *
                         T;
      out.amplitudes(n, m) = state.amplitudes(n, m) * std::exp(Complex{0.0, -phase});
    }
  return out;
}

Real ReducedDensity::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Real ReducedDensity::trace_defect() const {
  return std::abs(matrix.trace() - Complex{1.0, 0.0});
}

Real ReducedDensity::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<FockMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void ReducedDensity::validate() const {
  if (hermiticity_defect() > 1e-12)
    throw std::runtime_error("ReducedDensity: hermiticity defect exceeds 1e-12");
  if (trace_defect() > 1e-10) throw std::runtime_error("ReducedDensity: trace deviates from 1");
  if (min_eigenvalue() < -1e-10)
    throw std::runtime_error("ReducedDensity: negative eigenvalue beyond tolerance");
}

ReducedDensity reduced_density(const FockState& state) {
  ReducedDensity rho;
  rho.matrix = state.amplitudes * state.amplitudes.adjoint();
  return rho;
}

Real reduced_purity(const FockState& state) {
  const FockMatrix rho = state.amplitudes * state.amplitudes.adjoint();
  return rho.squaredNorm();  // tr ρ² for hermitian ρ
}

Real kerr_exact_purity_sum(Complex z0x, Complex z0y, Real Gamma, Real T, int N_cut) {
  if (N_cut <= 0) N_cut = coherent_cutoff(z0x);
  const Real mu = std::norm(z0x);
  const Real nu = std::norm(z0y);

  std::vector<Real> poisson(N_cut + 1);
  poisson[0] = std::exp(-mu);
  for (int n = 1; n <= N_cut; ++n) poisson[n] = poisson[n - 1] * mu / static_cast<Real>(n);

  Real total = 0.0;
  for (int n = 0; n <= N_cut; ++n) total += poisson[n] * poisson[n];
  for (int n = 0; n <= N_cut; ++n)
    for (int m = n + 1; m <= N_cut; ++m) {
      const Real s = std::sin(Gamma * T * static_cast<Real>(n - m) / 2.0);
      total += 2.0 * poisson[n] * poisson[m] * std::exp(-4.0 * nu * s * s);
    }
  return total;
}

Real short_time_purity(const VecN& z0, Real Gamma, Real T) {
  if (z0.size() != 2) throw std::invalid_argument("short_time_purity: z0 must have two modes");
  const Real g = Gamma * T;
  return 1.0 - 2.0 * std::norm(z0[0]) * std::norm(z0[1]) * g * g;
}

Complex kerr_exact_propagator(const KerrPairModel& kerr, const CoherentLabel& label1,
                              const CoherentLabel& label2, Real T, int N_cut) {
  label1.validate();
  label2.validate();
  if (label1.n_modes() != 2 || label2.n_modes() != 2)
    throw std::invalid_argument("kerr_exact_propagator: two-mode labels required");
  if (N_cut <= 0)
    N_cut = std::max(std::max(coherent_cutoff(label1.z[0]), coherent_cutoff(label1.z[1])),
                     std::max(coherent_cutoff(label2.z[0]), coherent_cutoff(label2.z[1])));

  const FockState initial = coherent_pair_fock(label1.z[0], label1.z[1], N_cut);
  const FockState evolved = evolve_kerr(initial, kerr, T);
  const FockState target = coherent_pair_fock(label2.z[0], label2.z[1], N_cut);
  return (target.amplitudes.conjugate().array() * evolved.amplitudes.array()).sum();
}

}  // namespace csp
