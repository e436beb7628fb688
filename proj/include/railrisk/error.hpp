#pragma once
#include <stdexcept>
#include <string>

namespace railrisk {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (scenario, CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

// A structurally valid input that violates a domain invariant. Carries the
// dotted path of the offending field, e.g. "train.manifest.consist".
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& msg)
        : Error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Cause-table percentages do not sum to 100 within tolerance.
class ChecksumError : public Error {
public:
    using Error::Error;
};

// Operation undefined for the given train configuration (e.g. yard
// switching for unit trains).
class NotApplicable : public Error {
public:
    using Error::Error;
};

// Consequence curve set lacks a required (location, wind, anchor) triple.
class MissingCurve : public Error {
public:
    using Error::Error;
};

// Argument outside the domain an operation is defined on.
class OutOfRange : public Error {
public:
    using Error::Error;
};

// Two pmfs with different support kinds were combined.
class SupportMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace railrisk
