#include "mdmp/error.hpp"

namespace mdmp {

const char *to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::StatsMismatch: return "StatsMismatch";
    case ErrorCode::InfeasibleK: return "InfeasibleK";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::NoAnomalyInTrainLabels: return "NoAnomalyInTrainLabels";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::NoAnomalyRange: return "NoAnomalyRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SpecInvalid: return "SpecInvalid";
    }
    return "Unknown";
}

} // namespace mdmp
