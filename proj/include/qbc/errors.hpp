// Error types shared across the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbc {

// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dimension or layout mismatches, and dimension-cap violations.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Numerical precondition failures: not-hermitian, not-psd, not-unitary,
// not-normalized, decomposition convergence failures.
class NumericError : public Error {
public:
    using Error::Error;
};

// Semantic validation failures of protocol specs and family parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Raised when a caller asserts perfect concealing but the states are not
// unitarily equivalent on Alice's side within the requested tolerance.
class NotConcealingError : public Error {
public:
    using Error::Error;
};

// Protocol-document errors. Every instance carries a machine-readable code
// and the byte offset of the offending token in the source text.
class ParseError : public Error {
public:
    ParseError(std::string code, const std::string& detail, std::size_t byte_offset)
        : Error(code + ": " + detail + " (byte " + std::to_string(byte_offset) + ")"),
          code_(std::move(code)),
          byte_offset_(byte_offset) {}

    const std::string& code() const { return code_; }
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::string code_;
    std::size_t byte_offset_;
};

} // namespace qbc
