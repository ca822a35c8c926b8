#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graspkit {

enum class ErrorCode {
  kInvalidArgument,
  kNotARectangle,
  kDegeneratePolygon,
  kEmptyTruthSet,
  kMissingAnnotation,
  kNonPositiveDepth,
  kKTooLarge,
  kPatchTooSmall,
  kDegeneratePatch,
  kEmptyCloud,
  kNoValidGrasp,
  kShapeMismatch,
  kWindowIndivisible,
  kBadMagic,
  kVersionUnsupported,
  kMissingTensor,
  kTruncated,
  kMalformedLine,
  kDanglingCorners,
  kBadHeader,
  kCountMismatch,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Every failure carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse errors that point at a 1-based line of the input.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace graspkit
