#pragma once

#include <stdexcept>
#include <string>

namespace slidecard {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// invalid parameters / parameter file (exit code 2)
class ConfigError : public Error {
 public:
  using Error::Error;
};

// malformed input text or binary stream (exit code 3)
class ParseError : public Error {
 public:
  using Error::Error;
};

// timestamp ordering violation beyond the configured tolerance
class OrderingError : public ParseError {
 public:
  using ParseError::ParseError;
};

// bad sketch file magic/version/truncation
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

// memory or work budget exceeded (exit code 4)
class ResourceError : public Error {
 public:
  using Error::Error;
};

// sketch merge with mismatched parameters, seeds or slice position (exit code 5)
class IncompatibleSketchError : public Error {
 public:
  using Error::Error;
};

// estimator array too full to produce a usable estimate
class SaturationError : public Error {
 public:
  using Error::Error;
};

}  // namespace slidecard
