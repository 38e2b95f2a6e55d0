#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blueberry {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed content in a line-oriented input file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Missing or unreadable file, or a failed write.
class IoError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid manifest, field spec, or config (wrong types, duplicate ids, bad ranges).
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace blueberry
