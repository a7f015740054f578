#pragma once

#include <stdexcept>
#include <string>

namespace scenediag {

enum class ErrorKind {
    validation,  // malformed or inconsistent user input
    io,          // filesystem failures
    config,      // missing environment / endpoint configuration
    network,     // transport failures after retries
    internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& message) {
    throw Error(ErrorKind::validation, message);
}

[[noreturn]] inline void fail_io(const std::string& message) {
    throw Error(ErrorKind::io, message);
}

}  // namespace scenediag
