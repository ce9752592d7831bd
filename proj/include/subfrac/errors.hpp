#pragma once

#include <stdexcept>
#include <string>

namespace subfrac {

/// Argument outside the mathematical domain of an operation (rho <= 0, t <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An evaluation could not certify its requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed problem setup: bad symbol, incompatible grids, aliasing.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace subfrac
