#pragma once

#include <cstdint>
#include <string>

#include "trafficrl/env/scenario.hpp"

namespace trafficrl {

/// Error in a scenario configuration file; the message carries file:line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a sectioned `key = value` scenario file on top of the built-in
/// defaults. Unknown sections or keys are rejected. `#` and `;` start
/// comments.
env::ScenarioConfig load_scenario(const std::string& path);

/// Same parser over an in-memory string (used by tests); `origin` names the
/// source in error messages.
env::ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

/// FNV-1a hash of the configuration text ("defaults" when no file given);
/// recorded in report metadata.
std::uint64_t config_hash(const std::string& text);

}  // namespace trafficrl
