#pragma once

#include <stdexcept>
#include <string>

namespace mixent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x <= 0 for
/// log_gamma, alpha <= 0 for Dirichlet weights, inverted brackets...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: Cholesky failure, non-finite likelihood.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A mixture component lost its mass or its covariance became singular.
class CollapseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed or degenerate input data.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixent
