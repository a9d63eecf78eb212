// Subcommands of kitaev_echo: echo, momdist, sweep, kicked, scaling, verify.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kitaev/cli/run_config.hpp"

namespace kitaev::cli {

/// Parses arguments (argv[0] is the program name), validates and runs. Data written to
/// "-" goes to out, diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs an already validated configuration. Throws ValidationError, IoError.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace kitaev::cli
