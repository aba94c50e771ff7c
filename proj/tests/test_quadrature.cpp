// test_quadrature.cpp — Gauss–Hermite nodes, weights, and polynomial exactness
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <csp/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace csp;

namespace {
const Real kSqrtPi = std::sqrt(std::numbers::pi);
}

TEST_CASE("small rules have their textbook closed forms") {
  SUBCASE("n = 1") {
    const GaussHermiteRule r = gauss_hermite(1);
    REQUIRE(r.nodes.size() == 1);
    CHECK(std::abs(r.nodes[0]) <= 1e-15);
    CHECK(r.weights[0] == doctest::Approx(kSqrtPi).epsilon(1e-14));
  }

  SUBCASE("n = 2") {
    const GaussHermiteRule r = gauss_hermite(2);
    REQUIRE(r.nodes.size() == 2);
    std::vector<Real> nodes = r.nodes;
    std::sort(nodes.begin(), nodes.end());
    CHECK(nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(nodes[1] == doctest::Approx(+1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
    CHECK(r.weights[1] == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
  }

  SUBCASE("n = 3") {
    const GaussHermiteRule r = gauss_hermite(3);
    REQUIRE(r.nodes.size() == 3);
    std::vector<size_t> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return r.nodes[i] < r.nodes[j]; });
    CHECK(r.nodes[order[0]] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
    CHECK(std::abs(r.nodes[order[1]]) <= 1e-14);
    CHECK(r.nodes[order[2]] == doctest::Approx(+std::sqrt(1.5)).epsilon(1e-14));
    CHECK(r.weights[order[0]] == doctest::Approx(kSqrtPi / 6.0).epsilon(1e-13));
    CHECK(r.weights[order[1]] == doctest::Approx(2.0 * kSqrtPi / 3.0).epsilon(1e-13));
    CHECK(r.weights[order[2]] == doctest::Approx(kSqrtPi / 6.0).epsilon(1e-13));
  }
}

TEST_CASE("moments are exact up to degree 2n-1") {
  // ∫ e^{−x²} x^{2k} dx = (2k−1)!! √π / 2^k
  const GaussHermiteRule r = gauss_hermite(12);
  Real double_factorial = 1.0;
  Real pow2 = 1.0;
  for (int k = 0; 2 * k <= 23; ++k) {
    if (k > 0) {
      double_factorial *= 2 * k - 1;
      pow2 *= 2.0;
    }
    Real even = 0.0, odd = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
      even += r.weights[i] * std::pow(r.nodes[i], 2 * k);
      if (2 * k + 1 <= 23) odd += r.weights[i] * std::pow(r.nodes[i], 2 * k + 1);
    }
    const Real expected = double_factorial * kSqrtPi / pow2;
    CHECK(even == doctest::Approx(expected).epsilon(1e-13));
    // odd moments vanish by symmetry; the measured sum is pure cancellation roundoff,
    // which at degree 23 reaches ~1e-12 of the even-moment scale
    CHECK(std::abs(odd) <= 1e-11 * std::max(1.0, expected));
  }
}

TEST_CASE("weights sum to sqrt(pi) for any order") {
  for (int n : {1, 5, 16, 64}) {
    const GaussHermiteRule r = gauss_hermite(n);
    Real sum = 0.0;
    for (Real w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(kSqrtPi).epsilon(1e-13));
  }
}

TEST_CASE("tensor-product rule integrates a coupled gaussian") {
  // ∫∫ e^{−x²−y²+a x y} dx dy = π / sqrt(1 − a²/4)
  const Real a = 0.8;
  const GaussHermiteRule r = gauss_hermite(48);
  Real sum = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    for (size_t j = 0; j < r.nodes.size(); ++j)
      sum += r.weights[i] * r.weights[j] * std::exp(a * r.nodes[i] * r.nodes[j]);
  const Real expected = std::numbers::pi / std::sqrt(1.0 - a * a / 4.0);
  CHECK(sum == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("invalid order throws") {
  CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite(-3), std::invalid_argument);
}
