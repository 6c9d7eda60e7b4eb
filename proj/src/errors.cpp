#include "handover/errors.hpp"

namespace handover {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateDirection: return "DegenerateDirection";
    case ErrorCode::kParallelAxes: return "ParallelAxes";
    case ErrorCode::kNonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorCode::kInvalidRotation: return "InvalidRotation";
    case ErrorCode::kInvalidPoseBlock: return "InvalidPoseBlock";
    case ErrorCode::kModelMismatch: return "ModelMismatch";
    case ErrorCode::kDegenerateNormal: return "DegenerateNormal";
    case ErrorCode::kAmbiguousHandedness: return "AmbiguousHandedness";
    case ErrorCode::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::kNoCandidatesFound: return "NoCandidatesFound";
    case ErrorCode::kWidthExceedsGripper: return "WidthExceedsGripper";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kTemplateMismatch: return "TemplateMismatch";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kNoObjectResolved: return "NoObjectResolved";
    case ErrorCode::kMissingHandedness: return "MissingHandedness";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kNonSuccessStatus: return "NonSuccessStatus";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kProviderEmpty: return "ProviderEmpty";
    case ErrorCode::kAllCandidatesCollide: return "AllCandidatesCollide";
    case ErrorCode::kHandednessMismatch: return "HandednessMismatch";
    case ErrorCode::kDegenerateObservation: return "DegenerateObservation";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace handover
