#include "vpfp/error.hpp"

namespace vpfp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::GhostLayerMissing: return "GhostLayerMissing";
    case ErrorCode::TimeStepTooLarge: return "TimeStepTooLarge";
    case ErrorCode::InvalidInflow: return "InvalidInflow";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::ExcessiveTruncation: return "ExcessiveTruncation";
    case ErrorCode::EllipticSolveFailed: return "EllipticSolveFailed";
    case ErrorCode::StencilUnderresolved: return "StencilUnderresolved";
    case ErrorCode::ExtensionFailed: return "ExtensionFailed";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InvalidTestFunction: return "InvalidTestFunction";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {
std::string compose(ErrorCode code, const std::string& message, const std::string& stage) {
  std::string out(to_string(code));
  if (!stage.empty()) out += " [" + stage + "]";
  out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(compose(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      detail_(message) {}

Error Error::with_stage(std::string_view outer) const {
  std::string s(outer);
  if (!stage_.empty()) s += ":" + stage_;
  return Error(code_, detail_, std::move(s));
}

void raise(ErrorCode code, const std::string& message, std::string stage) {
  throw Error(code, message, std::move(stage));
}

}  // namespace vpfp
