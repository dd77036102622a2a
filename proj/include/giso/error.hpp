#pragma once

#include <stdexcept>
#include <string>

namespace giso {

/// Rejected input: malformed files, out-of-range symbols, invalid scopes or
/// hyperparameters. The CLI maps this to exit code 3.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure inside a numerical routine (solver, projection, eigen-solve).
/// The CLI maps this to exit code 2.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Warnings go to stderr unless silenced (tests silence them).
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace giso
