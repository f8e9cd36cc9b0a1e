#pragma once

#include <stdexcept>
#include <string>

namespace bcp {

enum class ErrorCode {
    NonPositiveDiffusion,
    QuadratureFailure,
    InversionFailure,
    BoundaryClassViolation,
    NonPositiveVariance,
    GridRegularityViolation,
    LatticeTooCoarse,
    EmptyInterior,
    DomainViolation,
    DimensionMismatch,
    InvalidArgument,
    ConfigError,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a code and the name of the
/// module that detected it ("model", "grid", "engine", ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string module, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorCode code_;
    std::string module_;
};

}  // namespace bcp
