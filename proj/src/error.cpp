#include "bi/error.hpp"

namespace bi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateVector: return "DegenerateVector";
    case ErrorCode::DegenerateHand: return "DegenerateHand";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::InvalidThresholds: return "InvalidThresholds";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InconsistentSceneSize: return "InconsistentSceneSize";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::DegenerateObstacle: return "DegenerateObstacle";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::EmptyEvalSet: return "EmptyEvalSet";
    case ErrorCode::CptMismatch: return "CptMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bi
