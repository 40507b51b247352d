#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lndkit {

// Broad classes used by the command-line front end to pick an exit code.
enum class ErrorCategory {
    Input,              // malformed or inconsistent user input
    ResourceExhausted,  // a configured computation cap was hit
    InternalFault,      // an identity that must hold did not
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorCategory::Input, what) {}
};

class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t position)
        : InputError("parse error at position " + std::to_string(position) + ": " + message),
          message_(message), position_(position) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string message_;
    std::size_t position_;
};

class UnknownVariable : public InputError {
public:
    explicit UnknownVariable(const std::string& name)
        : InputError("unknown variable '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ContextMismatch : public InputError {
public:
    explicit ContextMismatch(const std::string& where)
        : InputError("ring context mismatch in " + where) {}
};

class DimensionMismatch : public InputError {
public:
    explicit DimensionMismatch(const std::string& what) : InputError("dimension mismatch: " + what) {}
};

class DivisionByZero : public InputError {
public:
    DivisionByZero() : InputError("division by zero") {}
};

class NotDivisible : public InputError {
public:
    explicit NotDivisible(const std::string& what = "polynomial is not exactly divisible")
        : InputError(what) {}
};

class DegenerateMap : public InputError {
public:
    DegenerateMap() : InputError("degenerate map: df_1 ^ ... ^ df_q = 0") {}
};

class Uncertified : public InputError {
public:
    explicit Uncertified(const std::string& what) : InputError("uncertified distribution: " + what) {}
};

class NoProbeFound : public InputError {
public:
    NoProbeFound() : InputError("no probe tuple with nonzero J in the probe pool") {}
};

class ResourceExhausted : public Error {
public:
    explicit ResourceExhausted(const std::string& what)
        : Error(ErrorCategory::ResourceExhausted, "resource cap exceeded: " + what) {}
};

class InternalFault : public Error {
public:
    explicit InternalFault(const std::string& what)
        : Error(ErrorCategory::InternalFault, "internal fault: " + what) {}
};

}  // namespace lndkit
