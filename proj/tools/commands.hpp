#pragma once

#include <string>

#include "config.hpp"

namespace jacobi::cli {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_usage = 2 };

// Defaults for one subcommand; every key a config file or flag may set.
RunConfig default_config(const std::string& subcommand);

// Each command writes its artifacts under config "out" and returns an exit code.
int cmd_spectrum(const RunConfig& cfg);
int cmd_boundstate(const RunConfig& cfg);
int cmd_propagate(const RunConfig& cfg);
int cmd_decay(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

// Parses argv, resolves the configuration and dispatches.
int run(int argc, char** argv);

}  // namespace jacobi::cli
