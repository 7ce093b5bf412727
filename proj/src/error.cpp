#include "cuesync/error.hpp"

namespace cuesync {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::NonmonotonicIntervals: return "NonmonotonicIntervals";
    case ErrorKind::DanglingTimeSlotRef: return "DanglingTimeSlotRef";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::NonmonotonicTime: return "NonmonotonicTime";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::NonmonotonicMidpoints: return "NonmonotonicMidpoints";
    case ErrorKind::NonpositiveLve: return "NonpositiveLve";
    case ErrorKind::DuplicateSentence: return "DuplicateSentence";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::DegenerateGroup: return "DegenerateGroup";
    case ErrorKind::NonpositiveInput: return "NonpositiveInput";
    case ErrorKind::MissingStats: return "MissingStats";
    case ErrorKind::DegenerateDesign: return "DegenerateDesign";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::EmptySide: return "EmptySide";
    case ErrorKind::UnfittedPredictor: return "UnfittedPredictor";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InstantOutOfRange: return "InstantOutOfRange";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::TooFewSentences: return "TooFewSentences";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::UsageError: return "UsageError";
    }
    return "UnknownError";
}

} // namespace cuesync
