#pragma once

#include <stdexcept>
#include <string>

namespace pcd {

enum class ErrorCode {
  kNotPositiveDefinite,
  kNotSymmetric,
  kDegenerateShape,
  kDegenerateInput,
  kNonConvergence,
  kSingularTransform,
  kEmptyMesh,
  kOpenMesh,
  kParseError,
  kIoError,
  kConfigError,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Numeric failures map to CLI exit code 3; input/config problems to 2.
inline bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite:
    case ErrorCode::kNotSymmetric:
    case ErrorCode::kDegenerateShape:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kSingularTransform:
    case ErrorCode::kOpenMesh:
      return true;
    default:
      return false;
  }
}

}  // namespace pcd
