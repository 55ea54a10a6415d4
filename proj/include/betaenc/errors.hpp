#pragma once

#include <stdexcept>
#include <string>

namespace betaenc {

// Caller passed a parameter outside the operation's domain (beta outside
// (1,2], leak factor outside (0,1], gamma outside (0,1), ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite quantizer input.
class InvalidState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Encoder state left the configured ceiling; parameters are not certified.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, std::size_t step, double state)
      : NumericalError(what), step_(step), state_(state) {}
  std::size_t step() const noexcept { return step_; }
  double state() const noexcept { return state_; }

 private:
  std::size_t step_;
  double state_;
};

// No root accepted in the search window; more bits are needed.
class NoRootError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The pair (x, -x) produced identical-magnitude opposite streams (d == 0).
class NoSignalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A polynomial is not in the period-3 / factorable class, or an asserted
// structural bound failed.
class StructureViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace betaenc
