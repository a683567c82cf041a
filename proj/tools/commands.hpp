#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace irslab::cli {

/// Exit statuses shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;   // a numerical check was breached
inline constexpr int kExitUsage = 2;  // bad flags, config or fixture

struct Command {
  std::string name;
  std::string summary;
  std::vector<KeySpec> keys;
  int (*run)(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
};

const std::vector<Command>& commands();

}  // namespace irslab::cli
