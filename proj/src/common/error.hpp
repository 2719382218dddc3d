#pragma once

#include <stdexcept>
#include <string>

namespace hicd {

// Invalid configuration (bad config file, bad flags, incompatible
// checkpoints). Surfaces as exit code 2 / HICD_CONFIG_ERROR.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (corpus lines, checkpoint files,
// prediction files). Surfaces as exit code 1 / HICD_ERROR.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hicd
