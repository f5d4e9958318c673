#pragma once

#include <stdexcept>
#include <string>

namespace valuniform {

// Error categories map one-to-one onto CLI exit codes:
// Precondition -> 2, Precision / IterationCap -> 3.
enum class ErrorKind {
    Precondition,
    Precision,
    IterationCap,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    // Short machine-readable tag, e.g. "not-squarefree".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error precondition(std::string code, const std::string& msg) {
    return Error(ErrorKind::Precondition, std::move(code), msg);
}

inline Error precision_error(std::string code, const std::string& msg) {
    return Error(ErrorKind::Precision, std::move(code), msg);
}

}  // namespace valuniform
