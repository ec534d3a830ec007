#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rebal {

enum class ErrorCode {
    // data
    FileNotFound,
    HeaderMismatch,
    MalformedRow,
    UnknownColumn,
    EmptyDataset,
    UncastTarget,
    InvalidSchema,
    // encoding
    UnseenCategory,
    EmptyCategoryList,
    NotCategorical,
    UnmappedCategory,
    ReservedToken,
    // resampling
    KTooLarge,
    TooFewMinoritySamples,
    EmptyMinority,
    StrategyUnknown,
    // models
    NonFiniteLoss,
    NonFiniteScore,
    EmptyInput,
    DimensionMismatch,
    InvalidArgument,
    // metrics
    LengthMismatch,
    // pipeline
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Broad failure class; drives the CLI exit code.
enum class ErrorClass { Config, Data, Runtime };

ErrorClass classify(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Error raised inside the experiment pipeline, tagged with the stage that failed.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& inner)
        : Error(inner.code(), "stage '" + stage + "': " + inner.what()), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace rebal
