#pragma once

#include <stdexcept>
#include <string>

namespace pseudospec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or parameter-validation failure (bad family parameters,
/// non-integrable Laguerre overlap, wrong kinetic coefficient, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole of Gamma or of a hypergeometric denominator.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The square-root branch of V1 cannot be fixed by the Re > 0 rule.
class BranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Floating-point overflow while evaluating a potential or wavefunction.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Series, quadrature or eigensolver failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No imaginary shift maps V(x) onto conj(V(x)) for this potential.
class NoKnownShiftError : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudospec
