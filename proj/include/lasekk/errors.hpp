#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lasekk {

/// Base for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad inputs or violated preconditions. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point too close to the sample window edge for a principal-value transform.
class EdgeEvaluation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure on valid inputs. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleOnRealAxis : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BadTailFit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace detail {

template <typename Scalar>
void require_finite(Scalar value, const char* what) {
  using std::isfinite;
  if (!isfinite(value)) throw ValidationError(std::string(what) + " must be finite");
}

template <typename Scalar>
void require_positive(Scalar value, const char* what) {
  require_finite(value, what);
  if (!(value > Scalar(0))) throw ValidationError(std::string(what) + " must be > 0");
}

template <typename Scalar>
void require_non_negative(Scalar value, const char* what) {
  require_finite(value, what);
  if (value < Scalar(0)) throw ValidationError(std::string(what) + " must be >= 0");
}

}  // namespace detail
}  // namespace lasekk
