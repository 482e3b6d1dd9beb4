#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vcsp {

/// Malformed instance structure or an out-of-range variable/value index.
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (non-live value, stale checkpoint, ...).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numeric argument lies outside the domain of the formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Instance document could not be read. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Document is syntactically fine but describes an inconsistent instance.
class ValidationError : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace vcsp
