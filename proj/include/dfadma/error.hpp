#pragma once

#include <stdexcept>
#include <string>

namespace dfadma {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unparseable input text.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input whose content violates a data invariant (duplicates, ordering).
class DataError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input for which the computation is mathematically undefined, e.g. log of a zero fluctuation.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfadma
