#pragma once

#include <stdexcept>
#include <string>

namespace cuesync {

// Stable error kinds. The CLI prints the kind name on stderr, so the
// names are part of the tool's contract and must not be renamed casually.
enum class ErrorKind {
    MalformedFile,
    NonmonotonicIntervals,
    DanglingTimeSlotRef,
    CountMismatch,
    LabelMismatch,
    NonmonotonicTime,
    SchemaViolation,
    NonmonotonicMidpoints,
    NonpositiveLve,
    DuplicateSentence,
    EmptyGroup,
    DegenerateGroup,
    NonpositiveInput,
    MissingStats,
    DegenerateDesign,
    TooFewPoints,
    EmptySide,
    UnfittedPredictor,
    LengthMismatch,
    InstantOutOfRange,
    MissingClass,
    TooFewSentences,
    InvalidProfile,
    UsageError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    const char* kind_name() const { return error_kind_name(kind_); }

private:
    ErrorKind kind_;
};

} // namespace cuesync
