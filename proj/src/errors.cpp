#include "pathgrad/errors.hpp"

namespace pathgrad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::PathLeavesDomain: return "PathLeavesDomain";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::InvalidBreakpoints: return "InvalidBreakpoints";
    case ErrorCode::NoViolation: return "NoViolation";
    case ErrorCode::NotMonotonic: return "NotMonotonic";
    case ErrorCode::SpecParseError: return "SpecParseError";
    case ErrorCode::NotConverged: return "NotConverged";
  }
  return "Unknown";
}

namespace {

std::string join_problems(const std::vector<std::string> &problems) {
  std::string out;
  for (const auto &p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

SpecParseError::SpecParseError(std::vector<std::string> problems)
    : Error(ErrorCode::SpecParseError, join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace pathgrad
