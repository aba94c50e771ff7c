// purity.cpp — saddle-point purity pipeline, determinant recipe, quadrature cross-check
#include <csp/purity.hpp>

#include <csp/phase_tracking.hpp>
#include <csp/quadrature.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace csp {

namespace {

void check_two_mode_inputs(const HamiltonianModel& model, const CoherentLabel& z0) {
  if (model.n_modes() != 2)
    throw std::invalid_argument("purity_semiclassical: model must have two modes");
  if (!hermiticity_check(model))
    throw std::invalid_argument("purity_semiclassical: model fails the hermiticity check");
  z0.validate();
  if (z0.n_modes() != 2)
    throw std::invalid_argument("purity_semiclassical: label must have two modes");
  if (std::abs(z0.hbar - model.hbar()) > 1e-12 * model.hbar())
    throw std::invalid_argument("purity_semiclassical: label and model must share hbar");
}

}  // namespace

SaddleFactors saddle_factors(const Mat2N& M) {
  if (M.rows() != 4 || M.cols() != 4)
    throw std::invalid_argument("saddle_factors: two-mode tangent required");
  SaddleFactors f;
  const MatN uu = M.topLeftCorner(2, 2);
  const MatN uv = M.topRightCorner(2, 2);
  const MatN vu = M.bottomLeftCorner(2, 2);
  const MatN vv = M.bottomRightCorner(2, 2);
  f.det_uu = uu.determinant();
  f.det_vv = vv.determinant();
  if (std::abs(f.det_uu) < 1e-14 || std::abs(f.det_vv) < 1e-14)
    throw FocalPointError("saddle_factors: singular M_uu or M_vv block (focal point)");
  f.a = vu * uu.inverse();
  f.b = uv * vv.inverse();
  f.q_trace = Complex{1.0, 0.0} - f.a(1, 1) * f.b(1, 1);
  if (std::abs(f.q_trace) < 1e-14)
    throw FocalPointError("saddle_factors: trace-integral form degenerate (focal point)");
  f.D = Complex{1.0, 0.0} / f.q_trace;
  f.A_a = f.a(0, 0);
  f.A_b = f.b(0, 0);
  f.C_a = f.a(0, 1) * f.a(0, 1) * f.b(1, 1) * f.D;
  f.C_b = f.b(0, 1) * f.b(0, 1) * f.a(1, 1) * f.D;
  f.C_c = f.a(0, 1) * f.b(0, 1) * f.D;
  const Complex ab = (f.A_a + f.C_a) * (f.A_b + f.C_b);
  const Complex cc2 = f.C_c * f.C_c;
  f.q_full = (Complex{1.0, 0.0} - ab) * (Complex{1.0, 0.0} - ab) -
             2.0 * cc2 * (Complex{1.0, 0.0} + ab) + cc2 * cc2;
  return f;
}

PurityBreakdown purity_semiclassical(const HamiltonianModel& model, const CoherentLabel& z0,
                                     Real T, const EvolveOptions& options) {
  check_two_mode_inputs(model, z0);

  PhaseTracker track_uu, track_vv, track_trace, track_full;
  SaddleFactors last;
  bool have_factors = false;

  EvolveOptions opts = options;
  opts.store_samples = false;
  opts.observer = [&](Real, const VecN&, const VecN&, const Mat2N& M) {
    last = saddle_factors(M);
    have_factors = true;
    track_uu.update(last.det_uu);
    track_vv.update(last.det_vv);
    track_trace.update(last.q_trace);
    track_full.update(last.q_full);
  };

  const PhasePoint start(z0.z, z0.z.conjugate());
  const TrajectoryRecord rec = evolve(model, start, T, +1, opts);
  if (!have_factors) throw std::logic_error("purity_semiclassical: observer never ran");

  PurityBreakdown out;
  out.a_matrix = last.a;
  out.b_matrix = last.b;
  out.D = last.D;
  out.A_a = last.A_a;
  out.A_b = last.A_b;
  out.C_a = last.C_a;
  out.C_b = last.C_b;
  out.C_c = last.C_c;
  out.det_Muu = last.det_uu;
  out.det_Mvv = last.det_vv;
  out.I_factor = track_full.inverse_sqrt();
  out.R_tilde = track_uu.inverse_sqrt() * track_vv.inverse_sqrt() * track_trace.inverse_sqrt();
  out.tangent = rec.tangent;

  const Complex purity = out.I_factor * out.R_tilde * out.R_tilde;
  out.imag_residue = std::abs(purity.imag());
  if (out.imag_residue > 1e-6)
    throw std::runtime_error("purity_semiclassical: pipeline inconsistency, imaginary residue " +
                             std::to_string(out.imag_residue));
  out.P = purity.real();
  out.S_lin = linear_entropy(out.P);
  out.x_parameter = std::numeric_limits<Real>::quiet_NaN();
  return out;
}

PurityBreakdown purity_semiclassical(const HamiltonianModel& model, const KerrPairModel& kerr,
                                     const CoherentLabel& z0, Real T,
                                     const EvolveOptions& options) {
  PurityBreakdown out = purity_semiclassical(model, z0, T, options);
  out.x_parameter = kerr.x_parameter(z0.z, T);
  return out;
}

DeterminantForm purity_determinant_form(const TangentMatrix& tangent) {
  const Mat2N& M = tangent.full;
  if (M.rows() != 4)
    throw std::invalid_argument("purity_determinant_form: two-mode tangent required");

  auto corner_dets = [&M](const std::array<int, 4>& rows) {
    Mat2N Q(4, 4);
    for (int i = 0; i < 4; ++i) Q.row(i) = M.row(rows[i]);
    struct Corners {
      Complex tl, tr, bl, br;
    } c;
    c.tl = MatN(Q.topLeftCorner(2, 2)).determinant();
    c.tr = MatN(Q.topRightCorner(2, 2)).determinant();
    c.bl = MatN(Q.bottomLeftCorner(2, 2)).determinant();
    c.br = MatN(Q.bottomRightCorner(2, 2)).determinant();
    return c;
  };

  DeterminantForm out;
  // (Ã D̃; C̃ B̃) from rows (1,4,3,2); (Ã′ D̃′; C̃′ B̃′) from rows (1,3,2,4)
  const auto main_blocks = corner_dets({0, 3, 2, 1});
  out.det_A = main_blocks.tl;
  out.det_D = main_blocks.tr;
  out.det_C = main_blocks.bl;
  out.det_B = main_blocks.br;
  const auto primed_blocks = corner_dets({0, 2, 1, 3});
  out.det_Ap = primed_blocks.tl;
  out.det_Bp = primed_blocks.br;

  out.det_Muu = MatN(M.topLeftCorner(2, 2)).determinant();
  out.det_Mvv = MatN(M.bottomRightCorner(2, 2)).determinant();

  const Complex duuvv = out.det_Muu * out.det_Mvv;
  const Complex ap_bp = out.det_Ap * out.det_Bp;
  out.E_prime = -4.0 * (duuvv * ap_bp) * (duuvv * ap_bp);
  out.E_dprime = out.det_Ap * out.det_Ap * out.det_B * out.det_D - ap_bp * ap_bp +
                 out.det_Bp * out.det_Bp * out.det_A * out.det_C;
  // literal form, including the self-canceling +E″ … −E″ pair
  const Complex bracket = out.E_dprime +
                          (duuvv - out.det_A * out.det_B) * (duuvv - out.det_C * out.det_D) -
                          out.E_dprime;
  out.E = out.E_prime + bracket * bracket;

  if (std::abs(out.E) < 1e-300)
    throw FocalPointError("purity_determinant_form: E vanished (singular sub-blocks)");
  out.P_value = duuvv / std::sqrt(out.E);  // principal root
  out.P_det = out.P_value.real();
  return out;
}

KerrClosedForm kerr_closed_form(const VecN& z0, Real Gamma, Real T) {
  if (z0.size() != 2) throw std::invalid_argument("kerr_closed_form: z0 must have two modes");
  KerrClosedForm out;
  const Real g = Gamma * T;
  out.x = std::norm(z0[0]) * std::norm(z0[1]) * g * g;
  const Real x = out.x;
  out.P_printed = (1.0 + x) / std::sqrt(1.0 + 6.0 * x + x * x * (3.0 + 2.0 * x) * (3.0 + 2.0 * x));
  out.P_pipeline = 1.0 / std::sqrt(1.0 + 4.0 * x);
  return out;
}

namespace {

// Real residual quadratic form of exp(½α s² + ½β s̄²) on (Re s, Im s).
Eigen::Matrix2d pair_residual_form(Complex alpha, Complex beta) {
  Eigen::Matrix2d R;
  const Real diag = (alpha.real() + beta.real()) / 2.0;
  const Real off = (beta.imag() - alpha.imag()) / 2.0;
  R << diag, off, off, -diag;
  return R;
}

Real max_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

SaddleCheckReport gaussian_saddle_check(const TangentMatrix& tangent, int n_quad) {
  if (n_quad < 2) throw std::invalid_argument("gaussian_saddle_check: n_quad must be >= 2");
  const SaddleFactors f = saddle_factors(tangent.full);
  const GaussHermiteRule rule = gauss_hermite(n_quad);
  const int n = n_quad;

  SaddleCheckReport report;

  // ---------- trace factor: ∫ d²w/π exp(−|w|² + ½ a_yy w² + ½ b_yy w̄²) ----------
  {
    const Complex alpha = f.a(1, 1);
    const Complex beta = f.b(1, 1);
    report.convergent_trace = max_eigenvalue(pair_residual_form(alpha, beta)) < 1.0;
    report.trace_closed = std::pow(f.q_trace, -0.5);
    if (report.convergent_trace) {
      Complex sum{0.0, 0.0};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex w{rule.nodes[i], rule.nodes[j]};
          sum += rule.weights[i] * rule.weights[j] *
                 std::exp(0.5 * alpha * w * w + 0.5 * beta * std::conj(w) * std::conj(w));
        }
      report.trace_quadrature = sum / std::numbers::pi;
      report.resid_trace = std::abs(report.trace_quadrature - report.trace_closed) /
                           std::abs(report.trace_closed);
    } else {
      report.resid_trace = std::numeric_limits<Real>::quiet_NaN();
    }
  }

  // ---- full factor: ∫ d²w d²z/π² exp(−|w|²−|z|² + ½α(w²+z²) + ½β(w̄²+z̄²) + γ(wz̄+w̄z)) ----
  {
    const Complex alpha = f.A_a + f.C_a;
    const Complex beta = f.A_b + f.C_b;
    const Complex gamma = f.C_c;

    Eigen::Matrix4d R = Eigen::Matrix4d::Zero();
    R.topLeftCorner(2, 2) = pair_residual_form(alpha, beta);
    R.bottomRightCorner(2, 2) = pair_residual_form(alpha, beta);
    // γ(wz̄ + w̄z) = 2γ(x_w x_z + y_w y_z); its real part couples the pairs
    R(0, 2) = R(2, 0) = gamma.real();
    R(1, 3) = R(3, 1) = gamma.real();
    report.convergent_full = max_eigenvalue(R) < 1.0;
    report.full_closed = std::pow(f.q_full, -0.5);

    if (report.convergent_full) {
      // Integrand factorizes as Ew(x_w,y_w)·Ez(x_z,y_z)·F(x_w,x_z)·F(y_w,y_z) with
      // F(s,t) = exp(2γ s t), so the 4-index sum reduces to matrix products.
      Eigen::MatrixXcd Ew(n, n), F(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex w{rule.nodes[i], rule.nodes[j]};
          Ew(i, j) = rule.weights[i] * rule.weights[j] *
                     std::exp(0.5 * alpha * w * w + 0.5 * beta * std::conj(w) * std::conj(w));
          F(i, j) = std::exp(2.0 * gamma * rule.nodes[i] * rule.nodes[j]);
        }
      // Σ_{ijkl} Ew(i,j) Ez(k,l) F(i,k) F(j,l)  =  Σ_{i,k} F(i,k) (Ew·F·Ezᵀ)(i,k), Ez = Ew
      const Eigen::MatrixXcd C = Ew * F * Ew.transpose();
      const Complex total = (F.array() * C.array()).sum();
      report.full_quadrature = total / (std::numbers::pi * std::numbers::pi);
      report.resid_full =
          std::abs(report.full_quadrature - report.full_closed) / std::abs(report.full_closed);
    } else {
      report.resid_full = std::numeric_limits<Real>::quiet_NaN();
    }
  }

  return report;
}

}  // namespace csp
