#pragma once

#include <functional>
#include <string>

#include "adiaband_cli/config.hpp"
#include "adiaband_cli/output.hpp"

namespace adiaband::cli {

using Logger = std::function<void(const std::string&)>;

// Runs the configured experiment. Module errors propagate; failed checks are
// recorded as assertions with pass = false.
RunResult run_experiment(const RunConfig& cfg, const Logger& log = {});

}  // namespace adiaband::cli
