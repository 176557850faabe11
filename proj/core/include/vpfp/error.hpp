#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vpfp {

enum class ErrorCode {
  NonFiniteField,
  GhostLayerMissing,
  TimeStepTooLarge,
  InvalidInflow,
  InsufficientHistory,
  ExcessiveTruncation,
  EllipticSolveFailed,
  StencilUnderresolved,
  ExtensionFailed,
  PositivityLost,
  NoConvergence,
  InvalidTestFunction,
  EmptyDistribution,
  BlowUp,
  GridMismatch,
  ParseError,
  ValidationFailed,
  MissingInput,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `stage` names the solver stage that
// raised it (e.g. "kinetic", "poisson", "picard:fluid") so drivers can report
// where a coupled step failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  // Returns a copy re-tagged with an outer stage prefix.
  Error with_stage(std::string_view outer) const;

 private:
  ErrorCode code_;
  std::string stage_;
  std::string detail_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message, std::string stage = {});

}  // namespace vpfp
