#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pathgrad {

enum class ErrorCode {
  OutOfDomain,
  InvalidStep,
  DimensionMismatch,
  InvalidParameter,
  ParameterOutOfRange,
  PathLeavesDomain,
  IndexOutOfRange,
  EndpointMismatch,
  InvalidBreakpoints,
  NoViolation,
  NotMonotonic,
  SpecParseError,
  NotConverged,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by integrated_gradients when a quadrature node maps outside the box.
class PathLeavesDomainError : public Error {
 public:
  PathLeavesDomainError(double t, const std::string &what)
      : Error(ErrorCode::PathLeavesDomain, what), t_(t) {}

  double parameter() const noexcept { return t_; }

 private:
  double t_;
};

/// Spec validation failure carrying every problem found, not just the first.
class SpecParseError : public Error {
 public:
  explicit SpecParseError(std::vector<std::string> problems);

  const std::vector<std::string> &problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace pathgrad
