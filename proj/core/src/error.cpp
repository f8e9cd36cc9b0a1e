#include "bcp/error.hpp"

namespace bcp {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveDiffusion: return "NonPositiveDiffusion";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::InversionFailure: return "InversionFailure";
        case ErrorCode::BoundaryClassViolation: return "BoundaryClassViolation";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::GridRegularityViolation: return "GridRegularityViolation";
        case ErrorCode::LatticeTooCoarse: return "LatticeTooCoarse";
        case ErrorCode::EmptyInterior: return "EmptyInterior";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + to_string(code) + ": " + message),
      code_(code),
      module_(std::move(module)) {}

}  // namespace bcp
