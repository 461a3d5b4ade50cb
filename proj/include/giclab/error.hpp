#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace giclab {

enum class ErrorCode {
    invalid_argument = 1,
    config = 2,
    convergence = 3,
    cap_exceeded = 4,
    numeric_overflow = 5,
    internal = 6,
};

const char* to_string(ErrorCode code) noexcept;

// Base of every exception thrown by the library. The C API maps the code
// one-to-one onto giclab_status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& message)
        : Error(ErrorCode::invalid_argument, message) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message)
        : Error(ErrorCode::config, message) {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& message)
        : Error(ErrorCode::convergence, message) {}
};

class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& message)
        : Error(ErrorCode::cap_exceeded, message) {}
};

class NumericOverflow : public Error {
public:
    explicit NumericOverflow(const std::string& message)
        : Error(ErrorCode::numeric_overflow, message) {}
};

// Non-fatal diagnostics (e.g. an interference law that is not unit variance).
// The default handler prints to stderr; passing an empty function restores it.
using WarningHandler = std::function<void(const std::string&)>;

void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace giclab
