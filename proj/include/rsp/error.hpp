#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsp {

enum class ErrorCode {
    InvalidArgument,
    InvalidNode,
    InvalidGraph,
    InvalidCost,
    NoPath,
    LimitExceeded,
    EmptyTable,
    EmptyMatrix,
    IncompleteSpeeds,
    NoTimestamps,
    IndexOutOfRange,
    DimensionMismatch,
    MissingCovariance,
    NonFiniteCosts,
    NodeBudgetExceeded,
    InsufficientConnectivity,
    UnsupportedExactSolve,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every library operation. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rsp
