#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hvconic {

enum class ErrorCode {
  InvalidParameter,
  GeometryMismatch,
  NonConvexColumn,
  CoverageError,
  TooLarge,
  ParseError,
  PreconditionViolated,
  NonSimpleChain,
  ZeroMass,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every library operation. The code is stable and
/// is what the CLI prints as `ERROR <code>: <message>`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hvconic
