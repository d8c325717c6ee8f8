#pragma once

#include <stdexcept>
#include <string>

namespace instrumental {

/// Raised when an operation would exceed a configured size limit
/// (strategy count, double-description rays, FM intermediate rows).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or vector dimensions do not fit together.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A correlation violates a required no-signalling or normalization property.
class SignallingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear program has no finite optimum.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace instrumental
