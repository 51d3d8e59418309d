#pragma once

#include <stdexcept>
#include <string>

namespace uogp {

/// Machine-readable failure categories. Grouped so a caller (e.g. the CLI)
/// can map them onto exit codes: validation errors reject the input,
/// numerical errors mean the computation could not be completed for a valid
/// input, and fixture errors mean embedded reference data failed its check.
enum class ErrorCode {
  // validation
  NonDecreasingQ,
  QGapBelowEpsilon,
  NonDivisibleK,
  NonPositiveKappa,
  IndexOutOfRange,
  OutOfRange,
  NotNormalized,
  TargetsNotIntegral,
  SizeLimit,
  InvalidArgument,
  ZeroRatio,
  UnknownTable,
  // numerical
  SingularGap,
  NotPSD,
  Infeasible,
  InfeasibleTriple,
  NotConverged,
  QuadratureUnderflow,
  NoFeasiblePoint,
  // fixtures
  NoFixture,
  FixtureMismatch,
};

/// Category used for process exit codes, see cli documentation.
enum class ErrorKind { Validation, Numerical, Fixture };

constexpr ErrorKind kind_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularGap:
    case ErrorCode::NotPSD:
    case ErrorCode::Infeasible:
    case ErrorCode::InfeasibleTriple:
    case ErrorCode::NotConverged:
    case ErrorCode::QuadratureUnderflow:
    case ErrorCode::NoFeasiblePoint:
      return ErrorKind::Numerical;
    case ErrorCode::NoFixture:
    case ErrorCode::FixtureMismatch:
      return ErrorKind::Fixture;
    default:
      return ErrorKind::Validation;
  }
}

const char* to_string(ErrorCode code);

/// Exception carrying a typed code plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return kind_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace uogp
