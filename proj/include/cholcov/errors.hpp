#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cholcov {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NotSymmetric,
    NotPositiveDefinite,
    NonFinite,
    EmptySample,
    ZeroVariance,
    LineSearchStall,
    BandTooLarge,
    SingularDesign,
    ConvergenceFailure,
    UndefinedMetric,
    LabelMismatch,
    ClassMissingInSplit,
    ParseError,
    RaggedRows,
    IoError,
    ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    /// The message without the code prefix that what() carries.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace cholcov
