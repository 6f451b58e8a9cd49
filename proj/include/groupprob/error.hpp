#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace groupprob {

enum class ErrorCode {
  InstanceMismatch,
  MalformedJson,
  UnknownKind,
  InvalidParameter,
  InvalidPower,
  BoundRequired,
  PowerOverflow,
  DuplicateIdempotent,
  Unsupported,
  GateNotPassed,
  NotNormed,
  InvalidArgument,
  TooLarge,
  UnknownLetter,
  UnknownFormat,
  Io,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries a stable code so the CLI and
/// the batch ledger can report it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace groupprob
