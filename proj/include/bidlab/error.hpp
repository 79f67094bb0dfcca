#pragma once

#include <stdexcept>
#include <string>

namespace bidlab {

// Input errors map to CLI exit code 2, numerical failures to exit code 3.
enum class ErrorKind { input, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Short machine-readable tag, e.g. "invalid_code" or "empty_matrix".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error input_error(std::string code, const std::string& message) {
    return Error(ErrorKind::input, std::move(code), message);
}

inline Error numerical_error(std::string code, const std::string& message) {
    return Error(ErrorKind::numerical, std::move(code), message);
}

}  // namespace bidlab
