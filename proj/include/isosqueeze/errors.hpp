#pragma once

#include <stdexcept>
#include <string>

namespace isosqueeze {

// Two families, mirrored by the CLI exit codes: bad input (2) and a numeric
// guard that tripped during an otherwise valid computation (3).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested parameters fall outside the regime where the asymptotic
/// formulas mean anything (e.g. eps * alpha^2 < 1).
class AsymptoticRegimeViolation : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class MismatchedSubspace : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class DimensionCapExceeded : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class StirlingCapExceeded : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class NormDriftExceeded : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

class TruncationTailExceeded : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

class DivergentSeries : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

class NoCrossing : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

/// Refusal to run a computation whose cost would explode (exact ensembles at large alpha).
class RuntimeGuardExceeded : public NumericGuardError {
 public:
  using NumericGuardError::NumericGuardError;
};

}  // namespace isosqueeze
