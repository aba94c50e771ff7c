// phase_tracking.hpp — continuous square-root branches along a sampled complex path
#pragma once

#include <csp/types.hpp>

#include <cmath>
#include <numbers>

namespace csp {

// Unwinds the argument of a nonvanishing complex path w(t) sampled finely enough that the
// phase advances by less than π/2 between samples. The continuous inverse square root
// w(t)^{-1/2} starts from +1 when w(0) = 1 and never jumps branches.
class PhaseTracker {
 public:
  explicit PhaseTracker(Complex w0 = Complex{1.0, 0.0}) { reset(w0); }

  void reset(Complex w0) {
    check_magnitude(w0);
    w_ = w0;
    theta_ = std::arg(w0);
  }

  void update(Complex w) {
    check_magnitude(w);
    const Real dtheta = std::arg(w / w_);
    if (std::abs(dtheta) >= std::numbers::pi / 2.0)
      throw std::runtime_error(
          "PhaseTracker: phase advanced by >= pi/2 in one step; integration step too coarse "
          "for branch tracking");
    theta_ += dtheta;
    w_ = w;
  }

  Complex value() const { return w_; }
  Real theta() const { return theta_; }  // continuously unwound argument

  // w^{-1/2} on the tracked branch
  Complex inverse_sqrt() const {
    return std::pow(std::abs(w_), -0.5) * std::exp(Complex{0.0, -theta_ / 2.0});
  }

  // w^{+1/2} on the tracked branch
  Complex sqrt() const {
    return std::sqrt(std::abs(w_)) * std::exp(Complex{0.0, theta_ / 2.0});
  }

  // Winding count: how many times the unwound argument left the principal sheet.
  int branch_index() const {
    return static_cast<int>(std::lround((theta_ - std::arg(w_)) / (2.0 * std::numbers::pi)));
  }

 private:
  static void check_magnitude(Complex w) {
    if (std::abs(w) < 1e-14)
      throw FocalPointError("PhaseTracker: tracked determinant vanished (focal point)");
  }

  Complex w_;
  Real theta_;
};

}  // namespace csp
