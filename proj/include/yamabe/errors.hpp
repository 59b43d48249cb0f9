#pragma once

#include <stdexcept>
#include <string>

namespace yamabe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (n < 3, r out of
/// range, exponent outside (2, 2♯], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid input data: non-positive a or f, too coarse a mesh, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Integral that does not converge (Aubin integrals with p - q - 1 <= 0).
class DivergentIntegralError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Operator -div(a grad) + b is not coercive on the discrete space.
class CoercivityError : public Error {
 public:
  using Error::Error;
};

/// Linear form requested as SPD but found indefinite.
class IndefiniteFormError : public Error {
 public:
  using Error::Error;
};

/// Iterative method hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Backtracking could not find an acceptable step.
class LineSearchError : public Error {
 public:
  using Error::Error;
};

/// Quadrature self-convergence check failed.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit too ill-conditioned to trust.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace yamabe
