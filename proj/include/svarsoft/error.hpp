#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svarsoft {

enum class ErrorCode {
    RankDeficient,
    NotPositiveDefinite,
    OutOfSample,
    InsufficientData,
    MissingContext,
    SchemaError,
    UnknownVariable,
    UnknownDate,
    AllInfeasible,
    EmptyVerdict,
    EmptySet,
    ShrinkBudgetExceeded,
    PlausibilityFloor,
    DegenerateWidth,
    ParseError,
    GapInDates,
    NonPositiveForLog,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is stable and is what the CLI
/// writes into its machine-readable error record.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace svarsoft
