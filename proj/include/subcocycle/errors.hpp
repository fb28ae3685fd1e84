#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace subcocycle {

// Base of every error raised by the library. The CLI maps the two families
// below to process exit codes (input: 1, numeric: 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Exact and floating scalars were combined in one computation.
class ModeMismatchError : public InputError {
 public:
  ModeMismatchError() : InputError("mode mismatch: exact and approx operands cannot be mixed") {}
};

class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

// Root finder did not converge. Carries the residuals of the best iterate.
class RootFindingError : public NumericError {
 public:
  RootFindingError(const std::string& what, std::vector<double> residuals)
      : NumericError(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

class PathError : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace subcocycle
