#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratelab {

// Root of every error the library raises. Callers that only care about
// "something in the model failed" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ClockRegression : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConfigNotFound : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InfeasibleAnchor : public Error {
 public:
  using Error::Error;
};

// A strategy or scenario error raised while simulating, tagged with the
// 1-based step at which it happened.
class SimulationError : public Error {
 public:
  SimulationError(std::int64_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace ratelab
