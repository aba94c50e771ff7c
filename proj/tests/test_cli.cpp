// test_cli.cpp — end-to-end subprocess tests of the csprop binary
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string binary_path() {
  const char* bin = std::getenv("CSPROP_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "CSPROP_BIN must point at the csprop binary");
  return bin;
}

struct RunResult {
  int exit_code = -1;
  std::string out, err;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs `prefix "<bin>" args` under /bin/sh with stdout/stderr captured to files.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = "cli_capture_out.txt";
  const std::string err_path = "cli_capture_err.txt";
  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += "\"" + binary_path() + "\" " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult result;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

int count_lines_starting_with(const std::string& text, const std::string& prefix) {
  int count = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) ++count;
  return count;
}

}  // namespace

TEST_CASE("--help lists every subcommand and the config keys") {
  const RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"ho-check", "kerr-purity", "bvp-solve", "propagator", "property-suite"})
    CHECK(r.out.find(name) != std::string::npos);
  for (const char* key : {"lambda", "T_count", "dt_max", "scenario", "z0_x"})
    CHECK(r.out.find(key) != std::string::npos);
}

TEST_CASE("bvp-solve converges on a harmonic boundary problem") {
  write_text("cli_harmonic.cfg", "scenario = harmonic\nomega = 1.3\n");
  const RunResult r =
      run_cli("--config cli_harmonic.cfg bvp-solve --z1=0.7+0.2i --z2=-0.4+0.9i --T=2 --xi=1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("1 converged trajectory") != std::string::npos);
  CHECK(r.out.find("solution 0") != std::string::npos);
  CHECK(r.out.find("residual") != std::string::npos);
}

TEST_CASE("kerr-purity writes the CSV schema to --out and logs the divergence split") {
  write_text("cli_kerr.cfg",
             "scenario = kerr\nlambda = 0.1\nT_start = 0\nT_stop = 1\nT_count = 6\n");
  const RunResult r = run_cli("--config cli_kerr.cfg --out cli_kerr.csv kerr-purity");
  CHECK(r.exit_code == 0);
  const std::string csv = read_file("cli_kerr.csv");
  const std::string header =
      "T,T_x,T_y,x,P_pipeline,P_printed,P_exact,S_lin,abs_dev_short_time,imag_residue,status";
  CHECK(csv.rfind(header, 0) == 0);
  CHECK(csv.find("\r\n") != std::string::npos);
  // log goes to stdout when --out is set
  CHECK(r.out.find("kerr-purity:") != std::string::npos);
  CHECK(r.out.find("P_printed") != std::string::npos);
}

TEST_CASE("ho-check passes its exactness bound from the command line") {
  const RunResult r = run_cli("ho-check", "CSPROP_DT_MAX=0.004");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("ho-check: PASS") != std::string::npos);
  CHECK(r.out.find("max |K_semi - K_exact|") != std::string::npos);
}

TEST_CASE("property-suite reports the one designed-red invariant and exits nonzero") {
  const RunResult r = run_cli("property-suite");
  CHECK(r.exit_code == 1);
  CHECK(count_lines_starting_with(r.out, "FAIL") == 1);
  CHECK(r.out.find("FAIL  entanglement_purity/short-time-law") != std::string::npos);
  CHECK(r.out.find("property-suite:") != std::string::npos);
  CHECK(count_lines_starting_with(r.out, "PASS") >= 15);
}

TEST_CASE("propagator streams CSV to stdout and its log to stderr") {
  write_text("cli_prop.cfg",
             "scenario = harmonic\nomega = 1.3\nz1_x = 0.4+0.1i\nz2_x = -0.2+0.3i\n"
             "T_start = 0\nT_stop = 1\nT_count = 3\n");
  const RunResult r = run_cli("--config cli_prop.cfg propagator --xi=-1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("T,K_semi_re,K_semi_im,K_exact_re,K_exact_im,abs_error", 0) == 0);
  CHECK(count_lines_starting_with(r.out, "") == 4);  // header + 3 rows
  CHECK(r.err.find("propagator:") != std::string::npos);
  CHECK(r.err.find("0 unsolved") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 2 and a prefixed message") {
  write_text("cli_bad.cfg", "bogus = 1\n");
  const RunResult r = run_cli("--config cli_bad.cfg kerr-purity");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("csprop: error:") != std::string::npos);
  CHECK(r.err.find("bogus") != std::string::npos);
}

TEST_CASE("unknown subcommands are rejected by the parser") {
  const RunResult r = run_cli("frobnicate");
  CHECK(r.exit_code != 0);
}
