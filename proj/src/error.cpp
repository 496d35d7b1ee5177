#include "hsv/error.hpp"

namespace hsv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::DegenerateArea: return "DegenerateArea";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::InvalidH: return "InvalidH";
    case ErrorCode::QualityFailure: return "QualityFailure";
    case ErrorCode::NoInteriorVertices: return "NoInteriorVertices";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AnchorNotVertex: return "AnchorNotVertex";
    case ErrorCode::AnchorOnBoundary: return "AnchorOnBoundary";
    case ErrorCode::CircleOutsideDomain: return "CircleOutsideDomain";
    case ErrorCode::NotPositiveComponent: return "NotPositiveComponent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hsv
