#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical configuration or input file; carries the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Numeric non-convergence (eigen solver, root finder, quadrature budget).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

/// Singular linear system, e.g. a scattering solve exactly on a real pole.
class SingularError : public Error {
public:
    using Error::Error;
};

/// Poles closer than the degeneracy threshold where simple poles are required.
class DegeneratePoles : public Error {
public:
    using Error::Error;
};

/// Request outside what the implementation supports (e.g. N > 2 Langevin).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Quantity undefined at the requested point (transmission zero, dead channel).
class IllConditioned : public Error {
public:
    using Error::Error;
};

}  // namespace wqed
