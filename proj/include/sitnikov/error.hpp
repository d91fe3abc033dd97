#pragma once

#include <stdexcept>
#include <string>

namespace sitnikov {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a singular point (collision with mu > 0, Q3 = 0 in rho's momenta).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// bounce_map called away from the collision set.
class NotAtCollisionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Energy level that does not exist in the real problem (h <= -4).
class NonexistentLevelError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Requested period ratio not attainable by T(h) on (-2, 0).
class OutOfRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Initial condition not on the L = 0 level of the regularized Hamiltonian.
class InvalidLevelError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative method or step-size control failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepFailureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sitnikov
