#pragma once

#include <stdexcept>
#include <string>

namespace trunctail {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model or experiment description is invalid (non-finite fields,
/// weights that do not sum to one, mismatched dimensions, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument is outside the range an operation accepts.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The sample cannot support the requested statistic (all zeros,
/// a zero order statistic, a zero denominator, ...).
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// A transform or bound was evaluated outside its domain of validity.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data could not be read or parsed.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to reach its target accuracy.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace trunctail
