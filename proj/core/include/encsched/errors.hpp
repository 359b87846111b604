#pragma once

#include <stdexcept>
#include <string>

namespace encsched {

// Invalid user-supplied values: model matrices, channel probabilities,
// problem parameters, config files. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerics: non-convergence, singular innovation covariance.
// CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A solved policy is not threshold-shaped. This is never repaired silently:
// it is either a solver bug or a numerical counterexample to the proven
// structure, and both must surface. CLI exit code 4.
class StructureViolation : public std::runtime_error {
 public:
  explicit StructureViolation(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariants (out-of-range ladder index, size mismatch
// between tables built by this library). Indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace encsched
