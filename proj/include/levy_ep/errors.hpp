#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levy_ep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation is not available for this model/coefficient pair.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or command line; the message names the field.
class UsageError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// A scheme produced a non-finite state.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(std::size_t step, const std::string& what)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace levy_ep
