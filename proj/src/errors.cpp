#include "cholcov/errors.hpp"

namespace cholcov {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::LineSearchStall: return "LineSearchStall";
        case ErrorCode::BandTooLarge: return "BandTooLarge";
        case ErrorCode::SingularDesign: return "SingularDesign";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::UndefinedMetric: return "UndefinedMetric";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::ClassMissingInSplit: return "ClassMissingInSplit";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace cholcov
