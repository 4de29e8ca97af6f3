#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrmc/types.hpp"

namespace lrmc::cli {

/// Bad command line or config file. Maps to exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; carries the text to print. Maps to exit status 0.
class HelpRequested {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct CliConfig {
  enum class Command { solve, bench, synth };
  Command command = Command::solve;

  std::filesystem::path data;
  std::string algo = "discrete_apg";
  std::vector<std::string> algos;            // bench
  double lambda = -1.0;                      // < 0 means auto (sigma_max / 50)
  double xi = 0.01;
  double theta = 1.0;
  double ratio = 0.2;
  std::vector<double> ratios;                // bench
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;          // bench
  int max_iter = 500;
  double rel_tol = 1e-4;
  std::vector<double> alphabet = {1, 2, 3, 4, 5};
  std::filesystem::path output;
  std::string format = "csv";
  Index m = 100, n = 80, rank = 5;           // synth
  int jobs = 1;
  int verbosity = 0;
};

/// Parse command-line arguments (program name excluded). Throws UsageError
/// on any problem and HelpRequested for --help. Flags may also come from a
/// `key = value` config file given with --config; explicit command-line
/// flags take precedence over file values.
CliConfig parse_args(const std::vector<std::string>& args);

/// Execute a parsed command. Returns 0 on success, 2 on runtime failure
/// (failures are reported on `err`, never thrown).
int run_cli(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: parse, run, map errors to exit codes
/// (0 ok, 1 usage, 2 runtime).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrmc::cli
