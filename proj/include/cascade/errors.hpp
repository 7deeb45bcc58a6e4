#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Raised when an input lies outside the physical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integration or linear algebra produced non-finite or unconverged values.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time-averaged correlation was requested for parameters whose
/// correlation does not decay.
class DivergentIntegralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed run configuration (CLI, config file, overrides).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace cascade
