#include "impatience/error.hpp"

namespace impatience {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::NotDecreasing: return "NotDecreasing";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
        case ErrorCode::HorizonMismatch: return "HorizonMismatch";
        case ErrorCode::DateBeyondHorizon: return "DateBeyondHorizon";
        case ErrorCode::BadPremiseOrder: return "BadPremiseOrder";
        case ErrorCode::PeriodOutOfRange: return "PeriodOutOfRange";
        case ErrorCode::NotDecreasingImpatience: return "NotDecreasingImpatience";
        case ErrorCode::NotConcave: return "NotConcave";
        case ErrorCode::BadBoundary: return "BadBoundary";
        case ErrorCode::TailRatioTooCloseToOne: return "TailRatioTooCloseToOne";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::HorizonExhausted: return "HorizonExhausted";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::AllWeightsZero: return "AllWeightsZero";
        case ErrorCode::NotStrictlyDecreasing: return "NotStrictlyDecreasing";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidEconomy: return "InvalidEconomy";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::EmptySupport: return "EmptySupport";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace impatience
