#pragma once

#include <stdexcept>
#include <string>

namespace isd {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed files, violated preconditions.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Singular systems, non-PD covariances and similar numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Too few rows for the requested regression.
class UnderdeterminedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace isd
