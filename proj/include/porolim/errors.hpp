#pragma once

#include <stdexcept>
#include <string>

namespace porolim {

/// Constitutive closures violate a structural assumption (e.g. both
/// permeabilities vanish at the same saturation).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive quadrature failed to reach the requested tolerance.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double achieved_error, double location)
        : std::runtime_error(what), achieved_error(achieved_error), location(location) {}

    double achieved_error;
    double location;
};

/// A time step produced saturations outside [-1e-12, 1+1e-12].
class StabilityError : public std::runtime_error {
public:
    StabilityError(const std::string& what, std::size_t cell, double value, double time)
        : std::runtime_error(what), cell(cell), value(value), time(time) {}

    std::size_t cell;
    double value;
    double time;
};

/// Invalid run configuration (bad key, bad value, failed validation).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A diagnostic needs dense recording but got a snapshot-only trajectory.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace porolim
