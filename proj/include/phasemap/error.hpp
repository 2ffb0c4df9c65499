#pragma once

#include <stdexcept>
#include <string>

namespace phasemap {

/// Invalid parameters or inputs that violate an operation's precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested dimension exceeds a configured cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver gave up; carries the best residual it reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasemap
