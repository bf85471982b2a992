#pragma once

#include <string>

#include "cqed/config.hpp"

namespace cqed {

// Exit codes shared with the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitIo = 4 };

struct CommandResult {
    std::string document;
    int exit_code = kExitOk;
};

// Each command renders its complete output document in memory. Hard errors
// propagate as exceptions, so nothing partial is ever written. cmd_reduce
// reports a resonance-proximity failure as an error record with
// kExitNumerical instead.
CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_reduce(const RunConfig& config);
CommandResult cmd_gate(const RunConfig& config);
CommandResult cmd_sweep(const RunConfig& config);

// "%.9g"; "nan" for NaN.
std::string format_number(double x);

}  // namespace cqed
