#pragma once

#include <stdexcept>
#include <string>

namespace mgaoi {

// Base of every library error. Subclasses map one-to-one onto CLI exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the region where a transform is defined (Re(s) < 0, bad order, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Model rejected: nonpositive rate or unstable load.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed scenario file, unknown family, bad option value.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Root finder, extrapolation or inversion failed to produce a finite, converged value.
class NumericError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericError {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : NumericError(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

}  // namespace mgaoi
