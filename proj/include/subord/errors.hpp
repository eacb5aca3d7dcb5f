#pragma once

#include <stdexcept>
#include <string>

namespace subord {

// Invalid triplet, malformed parameter, or out-of-domain argument.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative scheme exhausted its budget before reaching tolerance.
class NonConvergent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of subdivisions.
class MaxSubdivisions : public NonConvergent {
 public:
  using NonConvergent::NonConvergent;
};

// Inverse Laplace transform failed its forward-transform self-check.
class InversionUnstable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested a closed-form potential or passage density outside the catalog.
class NoClosedFormPotential : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conjugation (or another catalog lookup) does not recognize the spec.
class NotSpecialRecognized : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation is only defined for specs without killing.
class QZeroViolation : public SpecError {
 public:
  using SpecError::SpecError;
};

// Simulation exceeded its event budget.
class HorizonExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config file failed to parse or to map onto a valid spec; carries the
// 1-based line number of the offending entry (0 when not line-anchored).
class ConfigError : public SpecError {
 public:
  ConfigError(const std::string& what, int line = 0)
      : SpecError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

}  // namespace subord
