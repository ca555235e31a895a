#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dirac {

// Shape or dimension disagreement between operands.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction that should produce a Dirac structure did not.
class NotDirac : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invariant violated inside the library; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// State handed to an operation does not satisfy its preconditions to tolerance.
class InconsistentState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration document failed schema validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nonlinear step solve failed. Carries the Newton residual history and, for a
// singular Jacobian, the labels of the equation rows found to be dependent.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, std::vector<double> residual_log,
              std::vector<std::string> deficient_rows = {})
      : std::runtime_error(what),
        residual_log_(std::move(residual_log)),
        deficient_rows_(std::move(deficient_rows)) {}

  const std::vector<double>& residual_log() const { return residual_log_; }
  const std::vector<std::string>& deficient_rows() const { return deficient_rows_; }

 private:
  std::vector<double> residual_log_;
  std::vector<std::string> deficient_rows_;
};

}  // namespace dirac
