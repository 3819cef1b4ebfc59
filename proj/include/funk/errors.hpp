#pragma once

#include <stdexcept>
#include <string>

namespace funk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (zero vector,
// out-of-range parameter, Taylor evaluation outside its guard region).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A base point or translation vector is not inside the body with the
// required margin.
class InteriorViolation : public Error {
 public:
  using Error::Error;
};

// The metric tensor failed to be positive definite.
class RegularityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed JSON body/field descriptions or CLI arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace funk
