#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framefill {

enum class ErrorCode {
  kIo,
  kFormat,
  kNoPredicate,
  kMalformedFrame,
  kBothMissing,
  kIncompleteFrame,
  kPrecondition,
  kEmptyInventory,
  kEmptyTrainingSet,
  kModeMismatch,
  kVocabularyMismatch,
  kEmptyCandidateList,
  kInvalidLambda,
  kInsufficientData,
  kEmptyScenarioSet,
  kObjectNotFound,
  kNoTemplate,
  kInvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kNoPredicate: return "NoPredicate";
    case ErrorCode::kMalformedFrame: return "MalformedFrame";
    case ErrorCode::kBothMissing: return "BothMissing";
    case ErrorCode::kIncompleteFrame: return "IncompleteFrame";
    case ErrorCode::kPrecondition: return "PreconditionViolation";
    case ErrorCode::kEmptyInventory: return "EmptyInventory";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kEmptyCandidateList: return "EmptyCandidateList";
    case ErrorCode::kInvalidLambda: return "InvalidLambda";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kEmptyScenarioSet: return "EmptyScenarioSet";
    case ErrorCode::kObjectNotFound: return "ObjectNotFound";
    case ErrorCode::kNoTemplate: return "NoTemplate";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() identifies the
// failure class so callers (and the CLI) can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace framefill
