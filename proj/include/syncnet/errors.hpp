#pragma once

#include <stdexcept>
#include <string>

namespace syncnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (graph orders, matrix sizes).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter lies outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A value violates a domain invariant (weights, symmetry, definiteness, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed or produced an inconsistent result.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The requested bound method does not apply to this matrix.
class MethodError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent external input (JSON files, CLI arguments).
class InputError : public Error {
public:
    using Error::Error;
};

/// Random instance generation exhausted its draw budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

[[noreturn]] void throw_dimension(const std::string& what);
[[noreturn]] void throw_parameter(const std::string& what);

}  // namespace syncnet
