// errors.hpp — exception hierarchy shared by every module.
//
// ConfigError and its children map to CLI exit code 2, NumericalError and its
// children to exit code 3.

#pragma once

#include <stdexcept>
#include <string>

namespace omt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent user input. `key()` carries the offending key path
// ("optical.kappa_a_hz") when one exists.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, std::string key = {})
        : Error(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class UnsupportedConfiguration : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// An operation needs an input another module produces (e.g. steady state).
class DependencyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class SolverError : public NumericalError {
public:
    SolverError(const std::string& msg, double last_residual)
        : NumericalError(msg), residual_(last_residual) {}
    double last_residual() const noexcept { return residual_; }

private:
    double residual_;
};

class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SpectrumError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PhysicalityError : public NumericalError {
public:
    PhysicalityError(const std::string& msg, double time)
        : NumericalError(msg), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class LeakageError : public NumericalError {
public:
    LeakageError(const std::string& msg, double leakage)
        : NumericalError(msg), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

}  // namespace omt
