#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a precondition or type invariant (bad dims, non-Hermitian, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A tensor construction exceeds the product-dimension guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Numerical result outside the rounding envelope, e.g. a probability below -1e-12.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Evolved meters of a joint scenario do not commute.
class LocalityError : public Error {
 public:
  using Error::Error;
};

// A construction that should hold by design did not (e.g. a built process fails
// reproducibility). Indicates a bug, never bad user input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmeas
