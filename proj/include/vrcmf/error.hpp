#pragma once

#include <stdexcept>
#include <string>

namespace vrcmf {

/// Base class for every recoverable failure raised by the library. Messages
/// are single-line so the CLI can forward them verbatim.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when one applies.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Numerical breakdown (non-finite loss or gradient, failed factorization).
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace vrcmf
