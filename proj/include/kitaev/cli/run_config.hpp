// Run configuration of the kitaev_echo front-end and its validation.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kitaev/echo.hpp"

namespace kitaev::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitVerification = 2, kExitIo = 3 };

inline constexpr const char* kToolName = "kitaev_echo";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kEnvPrefix = "KITAEV_ECHO_";

/// All problems found in a configuration, reported together.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n_sites = 0;  // 0 selects the command default
  double r = 1.0;
  double j_x = 1.0;
  std::string h_f = "1";  // value, or start:step:stop for sweep
  double h_b = -1.0;
  std::string state = "vacuum";
  double t_max = 5.0;
  double dt = 0.01;
  std::string tau = "pi/4";
  long long kicks = 100;
  double time = 1.2;
  std::string k_range = "all";
  std::size_t window = 0;
  std::string sizes;
  std::string out = "-";
  std::string plot_script;
  int workers = 1;
  bool corrupt_engine = false;
  bool synthetic_peaks = false;

  /// n_sites, or 8 for verify and 32 otherwise when unset.
  int chain_length() const;
};

/// Angle or momentum: "15pi/32", "-pi/4", "2pi", "0.3".
double parse_angle(const std::string& text);

/// "vacuum", "uniform", "magnon:<m>" (quartet index m -> q = (2m-1)pi/N) or
/// "magnon:<momentum>" with a momentum in parse_angle syntax.
InitialState parse_state(const std::string& text, int n_sites);

/// "v" or "start:step:stop" (inclusive of stop within step/2).
std::vector<double> parse_range(const std::string& text);

/// Comma separated chain lengths.
std::vector<int> parse_sizes(const std::string& text);

/// Selected momenta for momdist: "all", "lo:hi" (inclusive), or a single momentum.
struct MomentumSelection {
  bool single = false;
  double k = 0.0;
  double lo = -kPi;
  double hi = kPi;
};
MomentumSelection parse_k_range(const std::string& text);

/// Every problem with the configuration; empty when valid.
std::vector<std::string> validate(const RunConfig& config);

/// Command line reproducing the configuration (worker count excluded).
std::string canonical_invocation(const RunConfig& config);

}  // namespace kitaev::cli
