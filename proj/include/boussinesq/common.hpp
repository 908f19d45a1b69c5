// Shared scalar aliases and error types for the Boussinesq laboratory.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace boussinesq {

using Real = double;
using Complex = std::complex<Real>;

using ArrayXr = Eigen::Array<Real, Eigen::Dynamic, 1>;
using ArrayXc = Eigen::Array<Complex, Eigen::Dynamic, 1>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace boussinesq
