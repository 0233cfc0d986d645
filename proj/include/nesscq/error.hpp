// error.hpp — Exception types raised by the nesscq library

#pragma once

#include <stdexcept>
#include <string>

namespace nesscq {

// Base of every library error; callers can catch this alone.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// λ ≥ 2√(ω1ω2): the qubit-reservoir rotating-wave form no longer applies.
class RotatingWaveViolation : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

class BasisMismatch : public Error {
public:
    using Error::Error;
};

// Bath setup outside what the closed-form solutions cover.
class UnsupportedClosedForm : public Error {
public:
    using Error::Error;
};

class SingularGenerator : public Error {
public:
    using Error::Error;
};

class NotSteadyState : public Error {
public:
    NotSteadyState(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class NotXState : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace nesscq
