#include "svarsoft/error.hpp"

namespace svarsoft {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::OutOfSample: return "OutOfSample";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::MissingContext: return "MissingContext";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::UnknownDate: return "UnknownDate";
        case ErrorCode::AllInfeasible: return "AllInfeasible";
        case ErrorCode::EmptyVerdict: return "EmptyVerdict";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::ShrinkBudgetExceeded: return "ShrinkBudgetExceeded";
        case ErrorCode::PlausibilityFloor: return "PlausibilityFloor";
        case ErrorCode::DegenerateWidth: return "DegenerateWidth";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::GapInDates: return "GapInDates";
        case ErrorCode::NonPositiveForLog: return "NonPositiveForLog";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace svarsoft
