#pragma once

#include <stdexcept>
#include <string>

namespace cautious {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands disagree on the number of attributes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A utility map does not match its subset family.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Malformed or contradictory input data (preferences, tiers, encodings).
class IngestionError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The LP solver failed to reach a verdict (iteration limit, numerical breakdown).
class EngineError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cautious
