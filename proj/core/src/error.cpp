#include "rebal/error.hpp"

namespace rebal {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::HeaderMismatch: return "HeaderMismatch";
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::UncastTarget: return "UncastTarget";
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::UnseenCategory: return "UnseenCategory";
        case ErrorCode::EmptyCategoryList: return "EmptyCategoryList";
        case ErrorCode::NotCategorical: return "NotCategorical";
        case ErrorCode::UnmappedCategory: return "UnmappedCategory";
        case ErrorCode::ReservedToken: return "ReservedToken";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::TooFewMinoritySamples: return "TooFewMinoritySamples";
        case ErrorCode::EmptyMinority: return "EmptyMinority";
        case ErrorCode::StrategyUnknown: return "StrategyUnknown";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::NonFiniteScore: return "NonFiniteScore";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorClass classify(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::ValidationError:
        case ErrorCode::StrategyUnknown:
            return ErrorClass::Config;
        case ErrorCode::FileNotFound:
        case ErrorCode::HeaderMismatch:
        case ErrorCode::MalformedRow:
        case ErrorCode::UnknownColumn:
        case ErrorCode::EmptyDataset:
        case ErrorCode::UncastTarget:
        case ErrorCode::InvalidSchema:
        case ErrorCode::UnseenCategory:
        case ErrorCode::NotCategorical:
        case ErrorCode::UnmappedCategory:
        case ErrorCode::ReservedToken:
        case ErrorCode::TooFewMinoritySamples:
        case ErrorCode::EmptyMinority:
        case ErrorCode::EmptyInput:
            return ErrorClass::Data;
        default:
            return ErrorClass::Runtime;
    }
}

} // namespace rebal
