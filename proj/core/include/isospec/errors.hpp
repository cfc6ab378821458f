#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace isospec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An abscissa or integration range falls outside a function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input violates an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Two independent computational routes disagree beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The integral operator has no nonzero eigenvalue.
class NoEigenvalueError : public Error {
 public:
  using Error::Error;
};

/// Newton refinement failed; carries the last iterate.
class RefinementError : public Error {
 public:
  RefinementError(const std::string& what, std::complex<double> last)
      : Error(what), last_iterate(last) {}
  std::complex<double> last_iterate;
};

/// A root-counting contour passes through (or too close to) a zero.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Refined roots cannot be reconciled with the winding-number count.
class IncompletenessError : public Error {
 public:
  IncompletenessError(const std::string& what, int found, int certified)
      : Error(what), found_count(found), certified_count(certified) {}
  int found_count;
  int certified_count;
};

/// Spectra with different lengths were compared.
class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace isospec
