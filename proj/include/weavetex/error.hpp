#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weavetex {

enum class ErrorCode {
    UnbalancedGroup,
    UnterminatedEnvironment,
    UnterminatedVerb,
    UnmatchedUnpause,
    PauseInsidePause,
    UnknownFormat,
    ParseError,
    DivisionByZero,
    UnboundIdentifier,
    Unsupported,
    BackendCrash,
    ProtocolViolation,
    IoError,
    VersionMismatch,
    DocMismatch,
    NoJobPlan,
    InvalidConfig,
};

std::string_view error_code_name(ErrorCode code) noexcept;

/// Every failure in the pipeline is reported as this exception. `line()` is
/// the 1-based source line when the failure is tied to a document position,
/// and 0 otherwise.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), code_(code), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::size_t line_;
};

} // namespace weavetex
