#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace superosc {

enum class ErrorKind {
  // input problems
  ValidationFailed,
  DuplicateTimes,
  EmptyWindow,
  MissingColumn,
  // numerical failures
  IllConditioned,
  TolUnachievable,
  StepSizeUnderflow,
  NormDriftExceeded,
  DegenerateRoots,
  ResonanceInBand,
  NotAsymptoticallyStatic,
};

std::string_view to_string(ErrorKind kind);

// True for kinds that indicate bad input rather than a numerical failure.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::ValidationFailed, message);
}

}  // namespace superosc
