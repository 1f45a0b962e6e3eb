#pragma once

#include <stdexcept>
#include <string>

namespace tw {

// Every error raised by the library derives from Error so callers that only
// care about "something went wrong" can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad jet order, unsupported option combination, unknown config key.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Caller misuse: out-of-range multi-index, wrong dimension.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Metric not positive definite, or a frame that cannot be built.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Point outside the domain of a function (pole, empty branch domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Quadrature divergence or another numeric breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid input values (non-unit 2-vector, non-positive weight, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace tw
