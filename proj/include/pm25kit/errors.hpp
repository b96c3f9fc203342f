#pragma once

#include <stdexcept>
#include <string>

namespace pm25 {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an operation's contract (bad lengths, bad flags, bad years).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// Input CSV header does not match the expected schema.
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& msg) : Error(msg) {}
};

/// A data row violates a record invariant (duplicate country, area <= 0, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// The data cannot support the requested statistic (zero variance, too few pairs).
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& msg) : Error(msg) {}
};

/// A model needs more observations than the series provides.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

/// A model fit collapsed (constant differenced series with AR/MA terms).
class DegenerateFitError : public Error {
public:
    explicit DegenerateFitError(const std::string& msg) : Error(msg) {}
};

/// A study found nothing to work on; the CLI maps this to exit code 2.
class EmptyStudyError : public Error {
public:
    explicit EmptyStudyError(const std::string& msg) : Error(msg) {}
};

} // namespace pm25
