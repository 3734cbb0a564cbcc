#pragma once

#include <stdexcept>
#include <string>

namespace neundiff {

/// Bad parameters, malformed input data, degenerate configurations. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Text-input parse failure; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& msg, long line)
        : ValidationError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Unreadable/unwritable files. CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Readable file but unsupported encoding (bit depth, color model, layout).
class FormatError : public IoError {
public:
    explicit FormatError(const std::string& msg) : IoError(msg) {}
};

} // namespace neundiff
