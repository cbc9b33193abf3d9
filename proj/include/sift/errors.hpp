#pragma once

#include <stdexcept>
#include <string>

namespace sift {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested problem size exceeds a documented capacity limit.
// The message always names the limit.
struct CapacityError : Error {
    using Error::Error;
};

// Invalid argument or configuration value.
struct ConfigError : Error {
    using Error::Error;
};

// A utility oracle failed to evaluate a mask.
struct OracleError : Error {
    using Error::Error;
};

// An iterative solver did not reach the required residuals within its cap.
struct SolverError : Error {
    using Error::Error;
};

// Training diverged or produced non-finite values.
struct TrainingError : Error {
    using Error::Error;
};

// File or serialization failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace sift
