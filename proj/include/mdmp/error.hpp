#pragma once

#include <stdexcept>
#include <string>

namespace mdmp {

enum class ErrorCode {
    InvalidArgument,
    InvalidWindow,
    StatsMismatch,
    InfeasibleK,
    DimMismatch,
    SeriesTooShort,
    RankOutOfRange,
    NoAnomalyInTrainLabels,
    DegenerateLabels,
    NoAnomalyRange,
    ParseError,
    NonFiniteValue,
    NonMonotonicTimestamp,
    IoError,
    SpecInvalid,
};

const char *to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace mdmp
