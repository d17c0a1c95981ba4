// Exception types thrown across the library. All derive from Error so
// callers can catch the library's failures in one clause when they want to.
#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape disagreement between operands (or with a stated dimension).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A matrix required to be symmetric positive definite failed its Cholesky
// factorization (a pivot was <= 0).
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// A square matrix handed to SymMat was not symmetric within tolerance.
class NotSymmetric : public Error {
 public:
  using Error::Error;
};

// Atom set contains no positive definite member, so no simplex combination
// can be evaluated by the strictly monotone objectives.
class InfeasibleAtoms : public Error {
 public:
  using Error::Error;
};

// A weight combination produced a (near-)singular matrix where a definite
// one was required.
class SingularCombination : public Error {
 public:
  using Error::Error;
};

// Brute-force lattice enumeration would exceed the hard point budget.
class GridTooLarge : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// Node estimate escaped its proven eigenvalue envelope; indicates a solver
// or bookkeeping bug, never expected in a healthy run.
class BoundednessViolation : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

// Innovation covariance in a filter update was not invertible.
class SingularInnovation : public Error {
 public:
  using Error::Error;
};

// Config file could not be read or is not valid JSON.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Config parsed but violates the schema or a value constraint. Messages
// carry the offending field path.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// An experiment failed after its config validated; wraps the inner error.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace loewner
