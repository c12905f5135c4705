#pragma once

#include <stdexcept>
#include <string>

namespace ideate {

enum class ErrorCode {
    // ingestion / validation
    MissingFile,
    SchemaError,
    DuplicateId,
    EmptyText,
    UnknownIdea,
    ValueOutOfRange,
    DuplicateRecord,
    EmptyFilter,
    EmptyTable,
    // lpa
    BadLexiconFile,
    EmptyVocabulary,
    SupportMismatch,
    // judge
    ParseError,
    NoSuccessfulRounds,
    ProviderUnconfigured,
    ProviderError,
    // agreement
    IncompleteMatrix,
    DegenerateAgreement,
    MissingCriterion,
    PopulationMismatch,
    LengthMismatch,
    ZeroVariance,
    SampleTooSmall,
    EmptyGroup,
    NoChosenIdeas,
    // io
    IoError,
};

const char* to_string(ErrorCode code);

/// Single exception type carrying a machine-checkable code plus a
/// human-readable message. The CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ideate
