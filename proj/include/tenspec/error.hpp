#pragma once

#include <stdexcept>
#include <string>

namespace tenspec {

// Base of every error the library raises. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sizes that do not fit together, including out-of-range mode numbers.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Arguments outside an operation's domain, such as p < 1 or NaN entries.
class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Malformed serialized input; `field()` names the offending JSON field.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error("field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace tenspec
