// dynamics.cpp — RK4 integration of the complexified flow, tangent matrix, and action
#include <csp/dynamics.hpp>

#include <cmath>

namespace csp {

namespace {

// Augmented state layout: [u (n) | v (n) | M column-major (4n²) | s_int | g_int]
constexpr int aug_size(int n) { return 2 * n + 4 * n * n + 2; }

// The integrator is instantiated per mode count, so the stage combinations and block
// products below run on fixed-size Eigen types (unrolled and allocation-free).
template <int N>
struct Derivative {
  using AugF = Eigen::Matrix<Complex, aug_size(N), 1>;
  using MatF = Eigen::Matrix<Complex, N, N>;
  using Mat2F = Eigen::Matrix<Complex, 2 * N, 2 * N>;

  Derivative(const HamiltonianModel& m, Complex c) : model(m), minus_i_over_hbar(c) {}

  const HamiltonianModel& model;
  Complex minus_i_over_hbar;
  mutable HamiltonianDerivatives d;
  // VecN views of the state for the model interface (sizes ≤ 2, never reallocated)
  mutable VecN uv_u = VecN(N);
  mutable VecN uv_v = VecN(N);

  void operator()(const AugF& y, AugF& dy) const {
    uv_u = y.template segment<N>(0);
    uv_v = y.template segment<N>(N);
    model.derivatives(uv_u, uv_v, d);

    dy.template segment<N>(0) = minus_i_over_hbar * d.grad_v.template head<N>();
    dy.template segment<N>(N) = -minus_i_over_hbar * d.grad_u.template head<N>();

    const MatF h_uu = d.h_uu, h_uv = d.h_uv, h_vu = d.h_vu, h_vv = d.h_vv;
    const Eigen::Map<const Mat2F> M(y.data() + 2 * N);
    Eigen::Map<Mat2F> dM(dy.data() + 2 * N);
    dM.template topRows<N>() =
        minus_i_over_hbar * (h_vu * M.template topRows<N>() + h_vv * M.template bottomRows<N>());
    dM.template bottomRows<N>() =
        -minus_i_over_hbar * (h_uu * M.template topRows<N>() + h_uv * M.template bottomRows<N>());

    // (iħ/2)(u̇v − uv̇) − H reduces on-shell to ½(u·H_u + v·H_v) − H
    const Complex s_integrand =
        0.5 * (dot_bilinear(uv_u, d.grad_u) + dot_bilinear(uv_v, d.grad_v)) - d.value;
    dy[2 * N + 4 * N * N] = s_integrand;
    dy[2 * N + 4 * N * N + 1] = h_uv.trace();
  }
};

template <int N>
void evolve_steps(const HamiltonianModel& model, const PhasePoint& start, Real T, int xi,
                  const EvolveOptions& options, long steps, Real dt, TrajectoryRecord& rec) {
  using D = Derivative<N>;
  using AugF = typename D::AugF;
  using Mat2F = typename D::Mat2F;

  AugF y;
  y.template segment<N>(0) = start.u;
  y.template segment<N>(N) = start.v;
  Eigen::Map<Mat2F>(y.data() + 2 * N).setIdentity();
  y[2 * N + 4 * N * N] = Complex{0.0, 0.0};
  y[2 * N + 4 * N * N + 1] = Complex{0.0, 0.0};

  VecN cur_u = start.u, cur_v = start.v;
  if (options.store_samples) {
    rec.samples.reserve(static_cast<size_t>(steps) + 1);
    rec.samples.push_back({0.0, cur_u, cur_v});
  }
  if (options.record_block_dets) {
    rec.det_uu_steps.reserve(static_cast<size_t>(steps) + 1);
    rec.det_vv_steps.reserve(static_cast<size_t>(steps) + 1);
    rec.det_uu_steps.push_back(Complex{1.0, 0.0});
    rec.det_vv_steps.push_back(Complex{1.0, 0.0});
  }
  if (options.observer) options.observer(0.0, cur_u, cur_v, rec.tangent.full);

  const D f(model, -kImag / model.hbar());
  AugF k1, k2, k3, k4, tmp;
  for (long step = 0; step < steps; ++step) {
    f(y, k1);
    tmp = y + (0.5 * dt) * k1;
    f(tmp, k2);
    tmp = y + (0.5 * dt) * k2;
    f(tmp, k3);
    tmp = y + dt * k3;
    f(tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Real t = (step + 1 == steps) ? T : dt * static_cast<Real>(step + 1);
    cur_u = y.template segment<N>(0);
    cur_v = y.template segment<N>(N);

    if (!y.allFinite())
      throw EscapeError("evolve: non-finite state at t = " + std::to_string(t));
    const Real mag = std::max(cur_u.cwiseAbs().maxCoeff(), cur_v.cwiseAbs().maxCoeff());
    if (mag > options.escape_bound)
      throw EscapeError("evolve: trajectory escaped (|state| = " + std::to_string(mag) +
                        ") at t = " + std::to_string(t));

    rec.max_energy_drift =
        std::max(rec.max_energy_drift, std::abs(model.eval(cur_u, cur_v) - rec.energy));

    if (options.store_samples) rec.samples.push_back({t, cur_u, cur_v});
    if (options.record_block_dets) {
      const Eigen::Map<const Mat2F> M(y.data() + 2 * N);
      if constexpr (N == 1) {
        rec.det_uu_steps.push_back(M(0, 0));
        rec.det_vv_steps.push_back(M(1, 1));
      } else {
        rec.det_uu_steps.push_back(M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0));
        rec.det_vv_steps.push_back(M(2, 2) * M(3, 3) - M(2, 3) * M(3, 2));
      }
    }
    if (options.observer) {
      rec.tangent.full = Eigen::Map<const Mat2F>(y.data() + 2 * N);
      options.observer(t, cur_u, cur_v, rec.tangent.full);
    }
  }

  rec.tangent.full = Eigen::Map<const Mat2F>(y.data() + 2 * N);
  if (!options.store_samples) {
    // keep endpoints available even without the full sample list
    rec.samples.push_back({0.0, start.u, start.v});
    if (steps > 0) rec.samples.push_back({T, cur_u, cur_v});
  }
  if (steps == 0 && rec.samples.back().t != T) rec.samples.push_back({T, cur_u, cur_v});

  const Complex s_int = y[2 * N + 4 * N * N];
  const Complex g_int = y[2 * N + 4 * N * N + 1];
  const Complex lambda = (kImag * model.hbar() / 2.0) *
                         (dot_bilinear(cur_u, cur_v) + dot_bilinear(start.u, start.v));
  rec.boundary_Lambda = lambda;
  rec.action_S = static_cast<Real>(xi) * s_int - lambda;
  rec.correction_G = (static_cast<Real>(xi) / 2.0) * g_int;
}

}  // namespace

TrajectoryRecord evolve(const HamiltonianModel& model, const PhasePoint& start, Real T, int xi,
                        const EvolveOptions& options) {
  model.check_mode_count(start);
  if (xi != 1 && xi != -1) throw std::invalid_argument("evolve: xi must be +1 or -1");
  if (!(T >= 0.0)) throw std::invalid_argument("evolve: T must be nonnegative");
  if (!(options.dt_max > 0.0)) throw std::invalid_argument("evolve: dt_max must be positive");

  const int n = model.n_modes();
  const long steps = (T > 0.0) ? static_cast<long>(std::ceil(T / options.dt_max - 1e-12)) : 0;
  if (steps > options.max_steps)
    throw std::invalid_argument("evolve: required step count exceeds max_steps");
  const Real dt = (steps > 0) ? T / static_cast<Real>(steps) : 0.0;

  TrajectoryRecord rec;
  rec.xi = xi;
  rec.T = T;
  rec.step_count = steps;
  rec.tangent = TangentMatrix(n);
  rec.energy = model.eval(start.u, start.v);
  rec.max_energy_drift = 0.0;

  if (n == 1)
    evolve_steps<1>(model, start, T, xi, options, steps, dt, rec);
  else
    evolve_steps<2>(model, start, T, xi, options, steps, dt, rec);
  return rec;
}

Real tangent_vs_finite_difference(const HamiltonianModel& model, const PhasePoint& start, Real T,
                                  int xi, const EvolveOptions& options, Real eps) {
  const int n = model.n_modes();
  EvolveOptions opts = options;
  opts.store_samples = false;
  opts.observer = nullptr;

  const TrajectoryRecord base = evolve(model, start, T, xi, opts);
  const Mat2N& M = base.tangent.full;

  Real max_err = 0.0;
  for (int j = 0; j < 2 * n; ++j) {
    PhasePoint plus = start, minus = start;
    auto& comp_p = (j < n) ? plus.u[j] : plus.v[j - n];
    auto& comp_m = (j < n) ? minus.u[j] : minus.v[j - n];
    comp_p += eps;
    comp_m -= eps;
    const TrajectoryRecord rp = evolve(model, plus, T, xi, opts);
    const TrajectoryRecord rm = evolve(model, minus, T, xi, opts);
    Vec2N col(2 * n);
    col.segment(0, n) = (rp.u_end() - rm.u_end()) / (2.0 * eps);
    col.segment(n, n) = (rp.v_end() - rm.v_end()) / (2.0 * eps);
    for (int i = 0; i < 2 * n; ++i) {
      const Real err = std::abs(col[i] - M(i, j)) / std::max(1.0, std::abs(M(i, j)));
      max_err = std::max(max_err, err);
    }
  }
  return max_err;
}

}  // namespace csp
