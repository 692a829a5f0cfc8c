#pragma once

#include <stdexcept>
#include <string>

namespace asyncdfl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (dimension mismatch, tx == rx, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidTask : public Error {
 public:
  using Error::Error;
};

class ProtocolStateError : public Error {
 public:
  using Error::Error;
};

class DegenerateTopology : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

// Thrown by the engine when a read violates the staleness bound in strict mode.
class StalenessViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace asyncdfl
