#pragma once

#include <stdexcept>
#include <string>

namespace nlsist {

// Base error carrying a short machine-readable code next to the human message.
// Codes are stable strings used by the CLI to build error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Invalid input data or parameters (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical procedure failed to reach its tolerance or detected an
// ill-posed configuration (CLI exit code 1).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace nlsist
