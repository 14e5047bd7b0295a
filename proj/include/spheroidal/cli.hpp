#pragma once

// Command-line front end. run_cli is the whole program minus argv handling,
// so tests can drive it in-process.
//
// Exit status: 0 ok, 1 invalid parameters, 2 I/O failure, 3 verification failed.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace spheroidal {

enum ExitCode : int {
  exit_ok = 0,
  exit_invalid = 1,
  exit_io = 2,
  exit_verify_failed = 3,
};

struct RunConfig {
  std::string command;  // coeffs | eval | verify
  int m = 1;
  int order = 8;
  std::vector<double> betas;
  int theta_points = 181;
  std::string format = "csv";  // csv | structured-text
  std::string output_path;     // empty: write to the output stream
  std::map<std::string, double> tolerances;
  bool corrupt_coefficient = false;  // test hook: perturbs E_1 before verifying
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const RunConfig& config);

int cmd_coeffs(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "%.17g".
std::string format_double(double x);

}  // namespace spheroidal
