#pragma once

#include <stdexcept>
#include <string>

namespace isoball {

// Argument outside an operation's domain: std::domain_error.
// Everything numeric that can fail after validation derives from NumericError.

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative method exhausted its budget.
struct ConvergenceError : NumericError {
  using NumericError::NumericError;
};

/// The equation has no root in the admissible range.
struct NoSolutionError : NumericError {
  using NumericError::NumericError;
};

/// A discrete check cannot be resolved at the given grid resolution.
struct ResolutionError : NumericError {
  using NumericError::NumericError;
};

/// A caller-side precondition that is only checkable numerically
/// (e.g. "this plane halves the body") does not hold.
struct PreconditionError : NumericError {
  using NumericError::NumericError;
};

} // namespace isoball
