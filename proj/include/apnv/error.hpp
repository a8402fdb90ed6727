#pragma once

#include <stdexcept>
#include <string>

namespace apnv {

/// Base of all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (group mismatch, unbound
/// variable, unknown name, place-set mismatch, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Checked 64-bit arithmetic overflowed.
class OverflowError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line_(line), col_(col), message_(message) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    int col_;
    std::string message_;
};

} // namespace apnv
