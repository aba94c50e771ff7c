// quadrature.hpp — Gauss–Hermite nodes/weights for ∫ e^{−x²} f(x) dx
#pragma once

#include <csp/types.hpp>

#include <vector>

namespace csp {

struct GaussHermiteRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;  // include the e^{−x²} weight: ∫e^{−x²}f ≈ Σ w_i f(x_i)
};

// Physicists' Gauss–Hermite rule by the Golub–Welsch eigenvalue method; exact for
// polynomials of degree ≤ 2n−1.
GaussHermiteRule gauss_hermite(int n);

}  // namespace csp
