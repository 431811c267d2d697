#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, invalid block specs, unparseable text.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Text-format error with a 1-based position.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : InputError("line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Diagonal balancing did not reach its tolerance.
class ScalingError : public Error {
 public:
  ScalingError(double residual, std::size_t sweeps)
      : Error("unit-consistent scaling did not converge after " +
              std::to_string(sweeps) + " sweeps (residual " +
              std::to_string(residual) + ")"),
        residual_(residual),
        sweeps_(sweeps) {}

  double residual() const noexcept { return residual_; }
  std::size_t sweeps() const noexcept { return sweeps_; }

 private:
  double residual_;
  std::size_t sweeps_;
};

/// Exact inversion requested for a numerically singular matrix.
class SingularityError : public Error {
 public:
  explicit SingularityError(double condition)
      : Error("matrix is numerically singular (condition estimate " +
              std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// The canonical-form similarity could not be computed reliably.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// A kernel failed inside a mixed-inverse assembly. `subexpression()` names
/// the argument that failed, outermost first, e.g. "Z-side complement / W".
class KernelError : public Error {
 public:
  KernelError(std::string subexpression, const std::string& cause)
      : Error("kernel failed on " + subexpression + ": " + cause),
        subexpression_(std::move(subexpression)),
        cause_(cause) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::string subexpression_;
  std::string cause_;
};

}  // namespace mixinv
