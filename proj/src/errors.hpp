#pragma once

#include <stdexcept>
#include <string>

namespace torex {

enum class ErrorCode {
    InvalidArgument,
    PrimeMismatch,
    LevelMismatch,
    GammaMismatch,
    NonUnit,
    PrecisionExhausted,
    PrecisionOverflow,
    PreconditionNotCertified,
    NonzeroRemainder,
    PointOnUnitCircle,
};

/// Exception carrying a stable code so the C layer can map failures to statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace torex
