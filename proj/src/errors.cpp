#include "emg/errors.hpp"

namespace emg {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonPositiveWorkFunction: return "NonPositiveWorkFunction";
    case ErrorKind::ScaledFieldOutOfRange: return "ScaledFieldOutOfRange";
    case ErrorKind::TemperatureRegimeError: return "TemperatureRegimeError";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonPositiveValue: return "NonPositiveValue";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateAbscissa: return "DegenerateAbscissa";
    case ErrorKind::PositiveSlope: return "PositiveSlope";
    case ErrorKind::MissingCurrent: return "MissingCurrent";
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::NonPositiveArea: return "NonPositiveArea";
    case ErrorKind::MultiPeak: return "MultiPeak";
  }
  return "Error";
}

bool Error::is_input_error() const noexcept {
  switch (kind_) {
    case ErrorKind::DomainError:
    case ErrorKind::NonPositiveWorkFunction:
    case ErrorKind::ParseError:
    case ErrorKind::NonPositiveValue:
    case ErrorKind::TooFewPoints:
    case ErrorKind::PositiveSlope:
    case ErrorKind::MissingCurrent:
    case ErrorKind::MissingSection:
    case ErrorKind::NonPositiveInput:
    case ErrorKind::NonPositiveArea:
      return true;
    case ErrorKind::ScaledFieldOutOfRange:
    case ErrorKind::TemperatureRegimeError:
    case ErrorKind::NonConvergence:
    case ErrorKind::DegenerateAbscissa:
    case ErrorKind::MultiPeak:
      return false;
  }
  return false;
}

}  // namespace emg
