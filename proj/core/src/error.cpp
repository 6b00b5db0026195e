#include "superosc/error.hpp"

namespace superosc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::DuplicateTimes: return "DuplicateTimes";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::TolUnachievable: return "TolUnachievable";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NormDriftExceeded: return "NormDriftExceeded";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::ResonanceInBand: return "ResonanceInBand";
    case ErrorKind::NotAsymptoticallyStatic: return "NotAsymptoticallyStatic";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ValidationFailed:
    case ErrorKind::DuplicateTimes:
    case ErrorKind::EmptyWindow:
    case ErrorKind::MissingColumn:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace superosc
