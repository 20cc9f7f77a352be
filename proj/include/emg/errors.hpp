#pragma once

#include <stdexcept>
#include <string>

namespace emg {

/// Every condition the library can reject has a distinct kind, so callers
/// (and the CLI exit-code mapping) can tell bad input from numeric failure.
enum class ErrorKind {
  DomainError,
  NonPositiveWorkFunction,
  ScaledFieldOutOfRange,
  TemperatureRegimeError,
  NonConvergence,
  ParseError,
  NonPositiveValue,
  TooFewPoints,
  DegenerateAbscissa,
  PositiveSlope,
  MissingCurrent,
  MissingSection,
  NonPositiveInput,
  NonPositiveArea,
  MultiPeak,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by caller-supplied input (CLI exit code 1);
  /// false for numeric/convergence failures (CLI exit code 2).
  bool is_input_error() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace emg
