#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace framescore {

/// Base of every error raised by the library. The CLI maps these to exit
/// status 1 and prints what().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Arguments outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    LookupError(const std::string& message, std::string key)
        : Error(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Inputs that are formally valid but make a statistic undefined
/// (zero variance, zero norm of a spread, ...).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

}  // namespace framescore
