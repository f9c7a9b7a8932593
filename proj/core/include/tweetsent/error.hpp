#pragma once

#include <stdexcept>
#include <string>

namespace tweetsent {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or parameters supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (files, rows, vectors).
class DataError : public Error {
 public:
  using Error::Error;
};

// Persisted model container could not be read back.
class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

// A numeric computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tweetsent
