#pragma once

#include <stdexcept>
#include <string>

namespace stabtune {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A call was made with invalid arguments (bad flag value, unsorted grid,
// negative lambda, ...). Maps to CLI exit code 2.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The input data cannot support the requested computation (missing column,
// non-numeric cell, zero-variance column, rank deficiency, n <= p for a
// saturated fit, ...). Maps to CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical failure during an otherwise valid computation (divergence,
// log of a non-positive value, no stable model on the grid, ...). Maps to
// CLI exit code 4.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace stabtune
