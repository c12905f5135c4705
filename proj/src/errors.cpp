#include "ideate/errors.hpp"

namespace ideate {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::UnknownIdea: return "UnknownIdea";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::EmptyFilter: return "EmptyFilter";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::BadLexiconFile: return "BadLexiconFile";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoSuccessfulRounds: return "NoSuccessfulRounds";
    case ErrorCode::ProviderUnconfigured: return "ProviderUnconfigured";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::IncompleteMatrix: return "IncompleteMatrix";
    case ErrorCode::DegenerateAgreement: return "DegenerateAgreement";
    case ErrorCode::MissingCriterion: return "MissingCriterion";
    case ErrorCode::PopulationMismatch: return "PopulationMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::NoChosenIdeas: return "NoChosenIdeas";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace ideate
