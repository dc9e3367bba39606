#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, empty inputs, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be (numerically) real or symmetric was not.
class NumericConsistency : public Error {
 public:
  using Error::Error;
};

/// Division by a vanishing denominator in the dual solve.
class Singularity : public Error {
 public:
  using Error::Error;
};

/// Non-finite objective during alternation.
class NumericDivergence : public Error {
 public:
  NumericDivergence(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Failure to read sequences, ground truth or configuration.
class IngestionError : public Error {
 public:
  using Error::Error;
};

}  // namespace rcf
