#pragma once

#include <stdexcept>
#include <string>

namespace geepower {

// Base for every error raised by the library. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A marginal mean falls outside the support of its outcome family.
class MeanRangeError : public Error {
 public:
  using Error::Error;
};

// A row that mixes control and intervention cells out of order under an
// incremental effect model.
class NonMonotoneSequenceError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Correlation or working covariance matrix failed Cholesky factorization.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

// The summed information matrix cannot be inverted (unidentifiable design).
class SingularInformationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Scenario file is missing a required key or carries an unusable value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scenario file text could not be tokenized (bad number, ragged matrix row).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace geepower
