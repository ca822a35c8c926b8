#include "graspkit/errors.hpp"

namespace graspkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotARectangle: return "NotARectangle";
    case ErrorCode::kDegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::kEmptyTruthSet: return "EmptyTruthSet";
    case ErrorCode::kMissingAnnotation: return "MissingAnnotation";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kPatchTooSmall: return "PatchTooSmall";
    case ErrorCode::kDegeneratePatch: return "DegeneratePatch";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kNoValidGrasp: return "NoValidGrasp";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kWindowIndivisible: return "WindowIndivisible";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kMissingTensor: return "MissingTensor";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDanglingCorners: return "DanglingCorners";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace graspkit
