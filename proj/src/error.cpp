#include "giclab/error.hpp"

#include <iostream>
#include <mutex>

namespace giclab {

namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot() {
    static WarningHandler h;
    return h;
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::config: return "config_error";
        case ErrorCode::convergence: return "convergence_failure";
        case ErrorCode::cap_exceeded: return "cap_exceeded";
        case ErrorCode::numeric_overflow: return "numeric_overflow";
        case ErrorCode::internal: return "internal_error";
    }
    return "unknown";
}

void set_warning_handler(WarningHandler handler) {
    std::lock_guard<std::mutex> lock(handler_mutex());
    handler_slot() = std::move(handler);
}

void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(handler_mutex());
    if (handler_slot()) {
        handler_slot()(message);
    } else {
        std::cerr << "giclab warning: " << message << '\n';
    }
}

}  // namespace giclab
