#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace gbm::cli {

struct CommandResult {
  std::string content;
  bool verify_failed = false;  // only `verify` sets this
};

const std::vector<std::string>& command_names();

// Runs one command and renders its report; module errors propagate as gbm::Error.
CommandResult run_command(const std::string& command, const RunConfig& cfg);

}  // namespace gbm::cli
