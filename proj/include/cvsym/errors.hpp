#pragma once

#include <stdexcept>
#include <string>

namespace cvsym {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrong matrix shape, or an asymmetric matrix where a covariance matrix is expected.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix (or parameter set) that violates the uncertainty relation.
class UnphysicalError : public Error {
 public:
  explicit UnphysicalError(const std::string& what, double min_nu = 0.0)
      : Error(what), min_nu_(min_nu) {}

  double min_nu() const noexcept { return min_nu_; }

 private:
  double min_nu_;
};

/// Symmetric square root failed: the input is not positive definite.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Invariants that do not correspond to any real symplectic spectrum.
class InvalidInvariants : public Error {
 public:
  using Error::Error;
};

/// Mode index, partition size or integer parameter outside its domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvsym
