#pragma once

#include <stdexcept>
#include <string>

namespace pmsm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Machine parameters violate a physical invariant.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Simulation configuration is inconsistent (step, duration, resolution).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical integration produced non-finite or diverging state.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Sampled input does not satisfy a precondition (length, coverage).
class InputError : public Error {
public:
    using Error::Error;
};

/// The requested fit has no unique solution for the supplied data.
class IdentifiabilityError : public Error {
public:
    using Error::Error;
};

} // namespace pmsm
