// config.cpp — flat key = value parsing, complex literals, env overrides
#include <csp/config.hpp>

#include <cctype>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csp {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Real parse_real_strict(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  Real value = 0;
  try {
    value = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "': invalid real '" + text + "'");
  }
  if (pos != t.size())
    throw std::invalid_argument("config: key '" + key + "': trailing characters in '" + text +
                                "'");
  return value;
}

long parse_long_strict(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "': invalid integer '" + text + "'");
  }
  if (pos != t.size())
    throw std::invalid_argument("config: key '" + key + "': trailing characters in '" + text +
                                "'");
  return value;
}

int parse_int_strict(const std::string& text, const std::string& key) {
  const long v = parse_long_strict(text, key);
  if (v < INT_MIN || v > INT_MAX)
    throw std::invalid_argument("config: key '" + key + "': integer out of range");
  return static_cast<int>(v);
}

unsigned long parse_ulong_strict(const std::string& text, const std::string& key) {
  const long v = parse_long_strict(text, key);
  if (v < 0) throw std::invalid_argument("config: key '" + key + "': must be nonnegative");
  return static_cast<unsigned long>(v);
}

Monomial parse_monomial_record(const std::string& text) {
  std::istringstream in(trim(text));
  Real c_re = 0, c_im = 0;
  int mx = 0, nx = 0, my = 0, ny = 0;
  if (!(in >> c_re >> c_im >> mx >> nx >> my >> ny))
    throw std::invalid_argument(
        "config: key 'monomial': expected 'coeff_re coeff_im m_x n_x m_y n_y', got '" + text +
        "'");
  std::string rest;
  if (in >> rest)
    throw std::invalid_argument("config: key 'monomial': trailing characters in '" + text + "'");
  if (mx < 0 || nx < 0 || my < 0 || ny < 0)
    throw std::invalid_argument("config: key 'monomial': exponents must be nonnegative");
  Monomial mono;
  mono.coeff = Complex{c_re, c_im};
  mono.m = {mx, my};
  mono.n = {nx, ny};
  return mono;
}

// Assigns one key = value pair; returns false when the key is unknown.
bool assign_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "scenario") {
    c.scenario = trim(value);
  } else if (key == "omega") {
    c.omega = parse_real_strict(value, key);
  } else if (key == "omega_x") {
    c.omega_x = parse_real_strict(value, key);
  } else if (key == "omega_y") {
    c.omega_y = parse_real_strict(value, key);
  } else if (key == "lambda") {
    c.lambda = parse_real_strict(value, key);
  } else if (key == "hbar") {
    c.hbar = parse_real_strict(value, key);
  } else if (key == "n_modes") {
    c.n_modes = parse_int_strict(value, key);
  } else if (key == "monomial") {
    c.monomials.push_back(parse_monomial_record(value));
  } else if (key == "z0_x") {
    c.z0_x = parse_complex(value);
  } else if (key == "z0_y") {
    c.z0_y = parse_complex(value);
  } else if (key == "z1_x") {
    c.z1_x = parse_complex(value);
  } else if (key == "z1_y") {
    c.z1_y = parse_complex(value);
  } else if (key == "z2_x") {
    c.z2_x = parse_complex(value);
  } else if (key == "z2_y") {
    c.z2_y = parse_complex(value);
  } else if (key == "T") {
    c.T = parse_real_strict(value, key);
  } else if (key == "T_start") {
    c.T_start = parse_real_strict(value, key);
  } else if (key == "T_stop") {
    c.T_stop = parse_real_strict(value, key);
  } else if (key == "T_count") {
    c.T_count = parse_int_strict(value, key);
  } else if (key == "dt_max") {
    c.dt_max = parse_real_strict(value, key);
  } else if (key == "escape_bound") {
    c.escape_bound = parse_real_strict(value, key);
  } else if (key == "max_steps") {
    c.max_steps = parse_long_strict(value, key);
  } else if (key == "bvp_tol") {
    c.bvp_tol = parse_real_strict(value, key);
  } else if (key == "bvp_max_iter") {
    c.bvp_max_iter = parse_int_strict(value, key);
  } else if (key == "n_cut") {
    c.n_cut = parse_int_strict(value, key);
  } else if (key == "n_quad") {
    c.n_quad = parse_int_strict(value, key);
  } else if (key == "out") {
    c.out = trim(value);
  } else if (key == "threads") {
    c.threads = parse_int_strict(value, key);
  } else if (key == "seed") {
    c.seed = parse_ulong_strict(value, key);
  } else {
    return false;
  }
  return true;
}

const char* const kKnownKeys[] = {
    "scenario", "omega",   "omega_x",      "omega_y",   "lambda",  "hbar",
    "n_modes",  "monomial", "z0_x",        "z0_y",      "z1_x",    "z1_y",
    "z2_x",     "z2_y",    "T",            "T_start",   "T_stop",  "T_count",
    "dt_max",   "escape_bound", "max_steps", "bvp_tol", "bvp_max_iter", "n_cut",
    "n_quad",   "out",     "threads",      "seed"};

}  // namespace

Complex parse_complex(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("parse_complex: empty value");

  auto parse_part = [&](const std::string& part, bool unit_allowed) -> Real {
    if (unit_allowed) {
      if (part.empty() || part == "+") return 1.0;
      if (part == "-") return -1.0;
    }
    std::size_t pos = 0;
    Real value = 0;
    try {
      value = std::stod(part, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_complex: invalid number in '" + text + "'");
    }
    if (pos != part.size())
      throw std::invalid_argument("parse_complex: trailing characters in '" + text + "'");
    return value;
  };

  if (t.back() != 'i' && t.back() != 'I') return Complex{parse_part(t, false), 0.0};

  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not an exponent sign and not leading.
  for (std::size_t k = body.size(); k-- > 1;) {
    const char ch = body[k];
    if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      const Real re = parse_part(body.substr(0, k), false);
      std::string imag_text = body.substr(k);
      const Real im = (imag_text == "+")   ? 1.0
                      : (imag_text == "-") ? -1.0
                                           : parse_part(imag_text, false);
      return Complex{re, im};
    }
  }
  return Complex{0.0, parse_part(body, true)};
}

std::string format_complex(Complex value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", value.real(), value.imag());
  return buf;
}

std::vector<Real> ExperimentConfig::time_grid() const {
  if (T_count < 1) throw std::invalid_argument("config: T_count must be >= 1 (empty T grid)");
  if (T_count == 1) return {T_start};
  if (!(T_stop > T_start))
    throw std::invalid_argument("config: T grid must be strictly increasing (T_stop > T_start)");
  std::vector<Real> grid(T_count);
  const Real dt = (T_stop - T_start) / static_cast<Real>(T_count - 1);
  for (int k = 0; k < T_count; ++k) grid[k] = T_start + dt * static_cast<Real>(k);
  grid.back() = T_stop;
  return grid;
}

void ExperimentConfig::validate() const {
  if (scenario != "harmonic" && scenario != "kerr" && scenario != "custom")
    throw std::invalid_argument("config: scenario must be harmonic, kerr, or custom, got '" +
                                scenario + "'");
  if (!(hbar > 0)) throw std::invalid_argument("config: hbar must be positive");
  if (!(dt_max > 0)) throw std::invalid_argument("config: dt_max must be positive");
  if (!(escape_bound > 0)) throw std::invalid_argument("config: escape_bound must be positive");
  if (max_steps < 1) throw std::invalid_argument("config: max_steps must be >= 1");
  if (!(bvp_tol > 0)) throw std::invalid_argument("config: bvp_tol must be positive");
  if (bvp_max_iter < 1) throw std::invalid_argument("config: bvp_max_iter must be >= 1");
  if (n_quad < 1) throw std::invalid_argument("config: n_quad must be >= 1");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (scenario == "custom") {
    if (n_modes < 1 || n_modes > kMaxModes)
      throw std::invalid_argument("config: n_modes must be 1 or 2");
    if (monomials.empty())
      throw std::invalid_argument("config: custom scenario needs at least one monomial");
  }
  time_grid();  // validates the grid shape
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::vector<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": empty key");
    if (key != "monomial") {
      for (const auto& prior : seen)
        if (prior == key)
          throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                      ": duplicate key '" + key + "'");
      seen.push_back(key);
    }
    if (!assign_key(config, key, value))
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    config.keys_set.push_back(key);
  }
  return config;
}

bool ExperimentConfig::is_set(const std::string& key) const {
  for (const auto& k : keys_set)
    if (k == key) return true;
  return false;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_env_overrides(ExperimentConfig& config) {
  for (const char* key : kKnownKeys) {
    std::string env_name = "CSPROP_";
    for (const char* p = key; *p; ++p)
      env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    const char* value = std::getenv(env_name.c_str());
    if (value == nullptr) continue;
    if (!assign_key(config, key, value))
      throw std::invalid_argument("config: unknown env key " + env_name);
    config.keys_set.push_back(key);
  }
}

std::string config_key_help() {
  return "Config file: one 'key = value' per line, '#' comments, complex values as re+imi.\n"
         "Environment override: CSPROP_<KEY-IN-UPPERCASE>=value.\n"
         "  scenario      kerr      model scenario: harmonic | kerr | custom\n"
         "  omega         1.0       harmonic frequency\n"
         "  omega_x       1.0       Kerr mode-x frequency\n"
         "  omega_y       1.0       Kerr mode-y frequency\n"
         "  lambda        0.1       Kerr coupling strength\n"
         "  hbar          1.0       Planck constant (positive)\n"
         "  n_modes       2         custom scenario: number of modes (1 or 2)\n"
         "  monomial      (none)    custom scenario: 'coeff_re coeff_im m_x n_x m_y n_y',\n"
         "                          repeatable; term coeff * v_x^m_x u_x^n_x v_y^m_y u_y^n_y\n"
         "  z0_x, z0_y    1+0i      initial coherent amplitudes for purity runs\n"
         "  z1_x, z1_y    0+0i      propagator start amplitudes\n"
         "  z2_x, z2_y    0+0i      propagator end amplitudes\n"
         "  T             1.0       single propagation time (bvp-solve, propagator)\n"
         "  T_start       0.0       time-grid start\n"
         "  T_stop        10.0      time-grid stop (must exceed T_start when T_count > 1)\n"
         "  T_count       101       time-grid points (>= 1)\n"
         "  dt_max        1e-3      integrator max step\n"
         "  escape_bound  1e6       trajectory escape threshold on |u|, |v|\n"
         "  max_steps     10000000  integrator step limit\n"
         "  bvp_tol       1e-10     boundary-residual tolerance\n"
         "  bvp_max_iter  50        Newton iteration limit\n"
         "  n_cut         0         Fock cutoff (0 = automatic Poisson tail)\n"
         "  n_quad        64        Gauss-Hermite nodes for the saddle check\n"
         "  out           (stdout)  output CSV path\n"
         "  threads       0         worker threads (0 = hardware concurrency)\n"
         "  seed          12345     RNG seed for randomized checks\n";
}

}  // namespace csp
