#pragma once

#include <stdexcept>
#include <string>

namespace roml {

// Base class for every error raised by the library. The CLI maps
// NumericError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite input entries or otherwise malformed arguments.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch between matrices, feature sets or permutations.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An assignment problem with fewer sources than targets.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused because the search space is too large.
class OversizeError : public Error {
 public:
  using Error::Error;
};

// Inconsistent solver configuration (e.g. n larger than some n_k).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an update step does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A zero feature column that cannot be normalized.
class DegenerateFeatureError : public Error {
 public:
  DegenerateFeatureError(const std::string& what, long column)
      : Error(what), column_(column) {}
  long column() const { return column_; }

 private:
  long column_;
};

// Fewer nontrivial generalized eigenvalues than requested dimensions.
class InsufficientSpectrumError : public Error {
 public:
  using Error::Error;
};

// SVD failure or a non-finite intermediate inside an iterative solver.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long iteration = -1)
      : Error(what), iteration_(iteration) {}
  // Iteration at which the failure was detected, -1 when not iterative.
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

// File system and parse failures in the I/O layer.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace roml
