#include "hvconic/error.hpp"

namespace hvconic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::NonConvexColumn: return "NonConvexColumn";
    case ErrorCode::CoverageError: return "CoverageError";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NonSimpleChain: return "NonSimpleChain";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hvconic
