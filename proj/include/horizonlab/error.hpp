#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horizonlab {

enum class ErrorCode {
    InvalidArgument,
    EvaluationOutsideDomain,
    InvalidProfile,
    SingularMetric,
    NotAxisymmetric,
    NoRealCharacteristics,
    NotOnErgosphere,
    DegenerateRank,
    MalformedCurve,
    MixedSign,
    NotCharacteristic,
    ZeroRoot,
    NotInErgoregion,
    ConstraintDrift,
    FrameDiscontinuity,
    ZeroTimeRate,
    NoSignChange,
    NoReturn,
    GridTooCoarse,
    CFLViolation,
    NonFiniteField,
    ZeroEnergy,
    NormalizationDomainError,
    NotABlackHole,
    PerturbationLeak,
    InvalidPerturbation,
    BoundaryPotentialNonzero,
    ParseError,
    ValidationError,
    UnknownKey,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error code. Every failure raised by
/// the library is an `Error`; callers branch on `code()`.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// True for errors caused by bad user input rather than numerics.
    bool is_validation() const noexcept {
        return code_ == ErrorCode::ParseError || code_ == ErrorCode::ValidationError ||
               code_ == ErrorCode::UnknownKey || code_ == ErrorCode::InvalidProfile;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace horizonlab
