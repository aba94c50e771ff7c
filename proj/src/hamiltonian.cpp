// hamiltonian.cpp — polynomial Hamiltonian evaluation and exact derivatives
#include <csp/hamiltonian.hpp>

#include <cmath>
#include <utility>

namespace csp {

namespace {

// value, first and second derivative of x^k (k >= 0) by repeated multiplication
struct PowerJet {
  Complex p;    // x^k
  Complex dp;   // k x^{k-1}
  Complex d2p;  // k(k-1) x^{k-2}
};

PowerJet power_jet(Complex x, int k) {
  PowerJet jet{Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}};
  if (k >= 1) {
    Complex pm1{1.0, 0.0};  // x^{k-1}
    for (int i = 1; i < k; ++i) pm1 *= x;
    jet.p = pm1 * x;
    jet.dp = Real(k) * pm1;
    if (k >= 2) {
      Complex pm2{1.0, 0.0};  // x^{k-2}
      for (int i = 2; i < k; ++i) pm2 *= x;
      jet.d2p = Real(k) * Real(k - 1) * pm2;
    }
  }
  return jet;
}

// Monomial accumulation instantiated per mode count so the short mode loops unroll;
// the accumulation order matches the generic loops exactly.
template <int N>
void derivatives_impl(const std::vector<Monomial>& monomials, const VecN& u, const VecN& v,
                      HamiltonianDerivatives& out) {
  Complex value{0.0, 0.0};
  Eigen::Matrix<Complex, N, 1> grad_u, grad_v;
  Eigen::Matrix<Complex, N, N> h_uu, h_uv, h_vv;
  grad_u.setZero();
  grad_v.setZero();
  h_uu.setZero();
  h_uv.setZero();
  h_vv.setZero();

  std::array<PowerJet, N> ju, jv;
  for (const auto& mono : monomials) {
    for (int r = 0; r < N; ++r) {
      ju[r] = power_jet(u[r], mono.n[r]);
      jv[r] = power_jet(v[r], mono.m[r]);
    }
    // product over all modes of u_r^{n_r} v_r^{m_r}
    Complex full = mono.coeff;
    for (int r = 0; r < N; ++r) full *= ju[r].p * jv[r].p;
    value += full;

    for (int r = 0; r < N; ++r) {
      // rest = coeff * Π_{s≠r} u_s^{n_s} v_s^{m_s}
      Complex rest = mono.coeff;
      for (int s = 0; s < N; ++s)
        if (s != r) rest *= ju[s].p * jv[s].p;
      grad_u[r] += rest * ju[r].dp * jv[r].p;
      grad_v[r] += rest * ju[r].p * jv[r].dp;
      h_uu(r, r) += rest * ju[r].d2p * jv[r].p;
      h_vv(r, r) += rest * ju[r].p * jv[r].d2p;
      h_uv(r, r) += rest * ju[r].dp * jv[r].dp;
      for (int s = r + 1; s < N; ++s) {
        Complex rest2 = mono.coeff;
        for (int t = 0; t < N; ++t)
          if (t != r && t != s) rest2 *= ju[t].p * jv[t].p;
        h_uu(r, s) += rest2 * ju[r].dp * jv[r].p * ju[s].dp * jv[s].p;
        h_vv(r, s) += rest2 * ju[r].p * jv[r].dp * ju[s].p * jv[s].dp;
        h_uv(r, s) += rest2 * ju[r].dp * jv[r].p * ju[s].p * jv[s].dp;
        h_uv(s, r) += rest2 * ju[s].dp * jv[s].p * ju[r].p * jv[r].dp;
      }
    }
  }
  for (int r = 0; r < N; ++r)
    for (int s = r + 1; s < N; ++s) {
      h_uu(s, r) = h_uu(r, s);
      h_vv(s, r) = h_vv(r, s);
    }

  out.value = value;
  out.grad_u = grad_u;
  out.grad_v = grad_v;
  out.h_uu = h_uu;
  out.h_uv = h_uv;
  out.h_vu = h_uv.transpose();
  out.h_vv = h_vv;
}

}  // namespace

HamiltonianModel::HamiltonianModel(int n_modes, Real hbar, std::vector<Monomial> monomials)
    : n_modes_(n_modes), hbar_(hbar), monomials_(std::move(monomials)) {
  if (n_modes_ < 1 || n_modes_ > kMaxModes)
    throw std::invalid_argument("HamiltonianModel: number of modes must be 1 or 2");
  if (!(hbar_ > 0.0)) throw std::invalid_argument("HamiltonianModel: hbar must be positive");
  for (const auto& mono : monomials_) {
    int degree = 0;
    for (int r = 0; r < kMaxModes; ++r) {
      if (mono.m[r] < 0 || mono.n[r] < 0)
        throw std::invalid_argument("HamiltonianModel: negative monomial power");
      if (r >= n_modes_ && (mono.m[r] != 0 || mono.n[r] != 0))
        throw std::invalid_argument("HamiltonianModel: power on a mode beyond n_modes");
      degree += mono.m[r] + mono.n[r];
    }
    if (degree > kMaxDegree)
      throw std::invalid_argument("HamiltonianModel: monomial degree exceeds max_degree 8");
    if (!std::isfinite(mono.coeff.real()) || !std::isfinite(mono.coeff.imag()))
      throw std::invalid_argument("HamiltonianModel: non-finite coefficient");
  }
}

void HamiltonianModel::check_mode_count(const PhasePoint& p) const {
  if (p.n_modes() != n_modes_)
    throw std::invalid_argument("HamiltonianModel: phase point mode count mismatch");
}

void HamiltonianModel::check_mode_count(const VecN& u, const VecN& v) const {
  if (u.size() != n_modes_ || v.size() != n_modes_)
    throw std::invalid_argument("HamiltonianModel: phase point mode count mismatch");
}

Complex HamiltonianModel::eval(const PhasePoint& p) const { return eval(p.u, p.v); }

Complex HamiltonianModel::eval(const VecN& u, const VecN& v) const {
  check_mode_count(u, v);
  Complex total{0.0, 0.0};
  for (const auto& mono : monomials_) {
    Complex term = mono.coeff;
    for (int r = 0; r < n_modes_; ++r) {
      for (int i = 0; i < mono.m[r]; ++i) term *= v[r];
      for (int i = 0; i < mono.n[r]; ++i) term *= u[r];
    }
    total += term;
  }
  return total;
}

void HamiltonianModel::gradient(const VecN& u, const VecN& v, VecN& grad_u, VecN& grad_v) const {
  HamiltonianDerivatives d;
  derivatives(u, v, d);
  grad_u = d.grad_u;
  grad_v = d.grad_v;
}

void HamiltonianModel::hessian(const VecN& u, const VecN& v, MatN& h_uu, MatN& h_uv, MatN& h_vu,
                               MatN& h_vv) const {
  HamiltonianDerivatives d;
  derivatives(u, v, d);
  h_uu = d.h_uu;
  h_uv = d.h_uv;
  h_vu = d.h_vu;
  h_vv = d.h_vv;
}

void HamiltonianModel::derivatives(const VecN& u, const VecN& v, HamiltonianDerivatives& out) const {
  check_mode_count(u, v);
  if (n_modes_ == 1)
    derivatives_impl<1>(monomials_, u, v, out);
  else
    derivatives_impl<2>(monomials_, u, v, out);
}

bool hermiticity_check(const HamiltonianModel& model, Real tol) {
  const auto& terms = model.monomials();
  for (const auto& a : terms) {
    // sum coefficients of all terms with exponents equal to a's partner pattern
    Complex partner_sum{0.0, 0.0};
    Complex same_sum{0.0, 0.0};
    for (const auto& b : terms) {
      if (b.m == a.n && b.n == a.m) partner_sum += b.coeff;
      if (b.m == a.m && b.n == a.n) same_sum += b.coeff;
    }
    if (std::abs(partner_sum - std::conj(same_sum)) > tol * (1.0 + std::abs(same_sum)))
      return false;
  }
  return true;
}

HamiltonianModel build_harmonic(Real omega, Real hbar) {
  if (!(omega > 0.0)) throw std::invalid_argument("build_harmonic: omega must be positive");
  std::vector<Monomial> terms(2);
  terms[0].coeff = Complex{hbar * omega, 0.0};
  terms[0].m[0] = 1;
  terms[0].n[0] = 1;
  terms[1].coeff = Complex{hbar * omega / 2.0, 0.0};
  return HamiltonianModel(1, hbar, std::move(terms));
}

Real KerrPairModel::x_parameter(const VecN& z0, Real T) const {
  if (z0.size() != 2) throw std::invalid_argument("KerrPairModel: z0 must have two modes");
  const Real g = Gamma() * T;
  return std::norm(z0[0]) * std::norm(z0[1]) * g * g;
}

std::pair<HamiltonianModel, KerrPairModel> build_kerr_pair(Real omega_x, Real omega_y, Real lambda,
                                                           Real hbar) {
  if (!(omega_x > 0.0) || !(omega_y > 0.0))
    throw std::invalid_argument("build_kerr_pair: frequencies must be positive");
  KerrPairModel params{omega_x, omega_y, lambda, hbar};
  std::vector<Monomial> terms(4);
  terms[0].coeff = Complex{hbar * params.Omega_x(), 0.0};
  terms[0].m = {1, 0};
  terms[0].n = {1, 0};
  terms[1].coeff = Complex{hbar * params.Omega_y(), 0.0};
  terms[1].m = {0, 1};
  terms[1].n = {0, 1};
  terms[2].coeff = Complex{hbar * params.Gamma(), 0.0};
  terms[2].m = {1, 1};
  terms[2].n = {1, 1};
  terms[3].coeff = Complex{params.epsilon0(), 0.0};
  return {HamiltonianModel(2, hbar, std::move(terms)), params};
}

PhasePoint phase_to_uv(const RealVecN& q, const RealVecN& p, const CoherentLabel& label) {
  label.validate();
  const auto n = label.z.size();
  if (q.size() != n || p.size() != n)
    throw std::invalid_argument("phase_to_uv: coordinate size mismatch");
  const Real inv_sqrt2 = 1.0 / std::sqrt(2.0);
  VecN u(n), v(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Complex a{q[r] / label.b[r], p[r] / label.c[r]};
    u[r] = inv_sqrt2 * a;
    v[r] = inv_sqrt2 * std::conj(a);
  }
  return PhasePoint(std::move(u), std::move(v));
}

void uv_to_phase(const PhasePoint& point, const CoherentLabel& label, VecN& q, VecN& p) {
  label.validate();
  point.validate();
  const auto n = label.z.size();
  if (point.n_modes() != n) throw std::invalid_argument("uv_to_phase: mode count mismatch");
  const Real inv_sqrt2 = 1.0 / std::sqrt(2.0);
  q.resize(n);
  p.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    q[r] = label.b[r] * (point.u[r] + point.v[r]) * inv_sqrt2;
    p[r] = -kImag * label.c[r] * (point.u[r] - point.v[r]) * inv_sqrt2;
  }
}

}  // namespace csp
