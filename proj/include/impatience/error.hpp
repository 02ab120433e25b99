#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace impatience {

enum class ErrorCode {
    NonPositiveValue,
    NotDecreasing,
    TooShort,
    ParamOutOfRange,
    HorizonMismatch,
    DateBeyondHorizon,
    BadPremiseOrder,
    PeriodOutOfRange,
    NotDecreasingImpatience,
    NotConcave,
    BadBoundary,
    TailRatioTooCloseToOne,
    SizeMismatch,
    HorizonExhausted,
    InvalidWeights,
    AllWeightsZero,
    NotStrictlyDecreasing,
    DimensionMismatch,
    InvalidEconomy,
    NoConvergence,
    EmptySupport,
    ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; every library failure is one of these.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace impatience
