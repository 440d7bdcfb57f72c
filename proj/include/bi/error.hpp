#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bi {

enum class ErrorCode {
  DegenerateVector,
  DegenerateHand,
  NonMonotoneTime,
  InvalidThresholds,
  EmptyScene,
  EmptyDataset,
  InconsistentSceneSize,
  ZeroEvidence,
  DegenerateObstacle,
  ParseError,
  SchemaViolation,
  EmptyEvalSet,
  CptMismatch,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library is reported through this type; the code lets
// callers (and tests) distinguish failure classes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bi
