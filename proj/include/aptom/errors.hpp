#pragma once

#include <stdexcept>
#include <string>

namespace aptom {

// Base of every error the library throws. The CLI maps each subclass onto a
// fixed process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed config text or a value that fails validation. `key()` names the
// offending config key (empty when the problem is not tied to one key).
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// The steady-state iteration failed to converge.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

// Parameters sit on a pole of the linear response (or a zero of |t| where a
// phase or logarithm is needed).
class SingularityError : public Error {
public:
    using Error::Error;
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace aptom
