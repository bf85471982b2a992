#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Base of every error thrown by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A valid parameter set that a particular routine does not handle, e.g. a
// dissipative lab-frame Hamiltonian.
class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double failure_time_us)
        : Error(what), failure_time_us_(failure_time_us) {}

    double failure_time_us() const noexcept { return failure_time_us_; }

private:
    double failure_time_us_;
};

// |1 - 2s| or |1 - s| too small for the eliminated model to mean anything.
class ResonanceProximity : public Error {
public:
    using Error::Error;
};

// Effective four-photon coupling vanishes (g = 0 or Omega = 0).
class NoGate : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key)
        : Error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace cqed
