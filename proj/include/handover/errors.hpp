#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace handover {

enum class ErrorCode {
  // geometry
  kDegenerateDirection,
  kParallelAxes,
  kNonUnitQuaternion,
  kInvalidRotation,
  // hand model
  kInvalidPoseBlock,
  kModelMismatch,
  kDegenerateNormal,
  kAmbiguousHandedness,
  // grasp selection
  kEmptyCandidateSet,
  kNoCandidatesFound,
  kWidthExceedsGripper,
  // intent
  kEmptyText,
  kTemplateMismatch,
  kUnknownObject,
  kNoObjectResolved,
  kMissingHandedness,
  kTimeout,
  kTransportError,
  kNonSuccessStatus,
  kMalformedResponse,
  kEmptyCorpus,
  // pipeline
  kProviderEmpty,
  kAllCandidatesCollide,
  kHandednessMismatch,
  kDegenerateObservation,
  // io
  kMalformedHeader,
  kUnsupportedEncoding,
  kInvalidInput,
  kIoError,
};

std::string_view error_name(ErrorCode code);

/// Base exception for every failure raised by the library. The code is
/// stable and is what the CLI reports in machine-readable mode.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

/// Raised when every grasp candidate fails the clearance check.
class AllCandidatesCollide : public Error {
 public:
  AllCandidatesCollide(const std::string& message, std::vector<double> min_distances)
      : Error(ErrorCode::kAllCandidatesCollide, message),
        min_distances_(std::move(min_distances)) {}

  /// Indexed like the candidate list handed to the pipeline.
  const std::vector<double>& min_distances() const noexcept { return min_distances_; }

 private:
  std::vector<double> min_distances_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace handover
