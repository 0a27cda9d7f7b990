#pragma once

#include <stdexcept>
#include <string>

namespace idsgame {

// Malformed or inconsistent user-supplied configuration.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to converge or lost its bracket.
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

// A quantity the model guarantees failed to hold at runtime.
struct invariant_violation : std::runtime_error {
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace idsgame
