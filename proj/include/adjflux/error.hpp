#pragma once

#include <stdexcept>
#include <string>

namespace adjflux {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition was violated (zero denominator, nonlinear
/// lead, unsupported substitution, ...).
class MathError : public Error {
 public:
  using Error::Error;
};

/// Numeric evaluation failed: unassigned atoms or a near-singular divisor.
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace adjflux
