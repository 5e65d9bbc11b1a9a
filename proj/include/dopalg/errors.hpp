#pragma once

#include <stdexcept>
#include <string>

namespace dopalg {

// Base of every error raised by the engine. The CLI maps ResourceBudgetExceeded
// to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class UnknownVariable : public Error {
 public:
  explicit UnknownVariable(const std::string& name) : Error("unknown variable: " + name) {}
};

class ZeroWeight : public Error {
 public:
  ZeroWeight() : Error("weight_rescale: weights must be nonzero") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ResourceBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotTerminated : public Error {
 public:
  NotTerminated() : Error("resolution was truncated before reaching a zero step") {}
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class InternalIdentityViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace dopalg
