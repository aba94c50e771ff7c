// config.hpp — flat key = value experiment configuration
#pragma once

#include <csp/hamiltonian.hpp>
#include <csp/types.hpp>

#include <string>
#include <vector>

namespace csp {

// Parses "re+imi" (also plain reals, "2.5i", "i", "-i", exponents like "1e+3i").
Complex parse_complex(const std::string& text);
std::string format_complex(Complex value);

// One experiment run. Every field has a CLI-documented default; see config_key_help().
struct ExperimentConfig {
  std::string scenario = "kerr";  // harmonic | kerr | custom

  // model parameters
  Real omega = 1.0;  // harmonic scenario
  Real omega_x = 1.0;
  Real omega_y = 1.0;
  Real lambda = 0.1;  // Kerr coupling strength
  Real hbar = 1.0;
  int n_modes = 2;                  // custom scenario
  std::vector<Monomial> monomials;  // custom scenario: repeated `monomial = ...` records

  // coherent labels (isotropic widths b = c = √ħ)
  Complex z0_x{1.0, 0.0};  // purity initial state
  Complex z0_y{1.0, 0.0};
  Complex z1_x{0.0, 0.0};  // propagator endpoints
  Complex z1_y{0.0, 0.0};
  Complex z2_x{0.0, 0.0};
  Complex z2_y{0.0, 0.0};

  // time grid
  Real T = 1.0;       // single-shot operations (bvp-solve, propagator default)
  Real T_start = 0.0;
  Real T_stop = 10.0;
  int T_count = 101;

  // integrator / solver settings
  Real dt_max = 1e-3;
  Real escape_bound = 1e6;
  long max_steps = 10'000'000;
  Real bvp_tol = 1e-10;
  int bvp_max_iter = 50;

  // oracle / quadrature cutoffs
  int n_cut = 0;  // 0 = automatic Poisson-tail cutoff
  int n_quad = 64;

  // run plumbing
  std::string out;  // empty = stdout
  int threads = 0;  // 0 = hardware concurrency
  unsigned long seed = 12345;

  // Keys explicitly set by file or environment (lets scenarios pick their own defaults).
  std::vector<std::string> keys_set;
  bool is_set(const std::string& key) const;

  std::vector<Real> time_grid() const;  // linspace over [T_start, T_stop], T_count points
  void validate() const;
};

// Parse from text/file. Unknown keys are errors; repeated keys are errors except
// `monomial`, which appends a record "coeff_re coeff_im m_x n_x m_y n_y".
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Apply environment overrides: CSPROP_<KEY-IN-UPPERCASE> replaces any config value.
void apply_env_overrides(ExperimentConfig& config);

// One line per key: "key  default  description" (used by --help).
std::string config_key_help();

}  // namespace csp
