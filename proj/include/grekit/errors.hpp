#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grekit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EmptySampleSet : public Error {
 public:
  using Error::Error;
};

/// 0 * (+inf) or a product that would leave the extended half-line.
class UndefinedProduct : public Error {
 public:
  using Error::Error;
};

class NotStochastic : public Error {
 public:
  using Error::Error;
};

class InvalidKernel : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable configuration / data file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A runtime precondition of a time-stepping scheme no longer holds.
/// `step()` is the index of the step that was being taken (0-based).
class PreconditionLost : public Error {
 public:
  PreconditionLost(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class CflViolation : public PreconditionLost {
 public:
  using PreconditionLost::PreconditionLost;
};

class DualPositivityLost : public PreconditionLost {
 public:
  using PreconditionLost::PreconditionLost;
};

class NonPositiveG : public PreconditionLost {
 public:
  using PreconditionLost::PreconditionLost;
};

}  // namespace grekit
