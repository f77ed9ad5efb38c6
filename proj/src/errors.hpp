#pragma once

#include <stdexcept>
#include <string>

namespace cbs {

// Requested object does not exist for the given parameters (e.g. a partition
// with more cells than the communication game supports).
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric routine failed: non-finite objective, bracket miss, divergence.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cbs
