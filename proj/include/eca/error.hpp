#pragma once

#include <stdexcept>
#include <string>

namespace eca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller handed in something that violates a documented precondition
/// (bad frame size, out-of-range strip row, empty point set, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Malformed configuration value or unknown configuration key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Weights stream does not describe a valid EdgeNet.
class CorruptWeights : public Error {
public:
    using Error::Error;
};

/// File system / codec failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace eca
