#pragma once

#include <stdexcept>
#include <string>

namespace kgs {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an operation precondition (index out of range, size mismatch).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Inconsistent or out-of-range configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Schedule rejected by validation before execution.
class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Per-point solve could not be carried out (zero pivot modulus, non-finite input).
class SingularStep : public Error {
public:
    using Error::Error;
};

/// NaN/Inf found in the state during time stepping.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace kgs
