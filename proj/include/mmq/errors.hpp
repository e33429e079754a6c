#pragma once

#include <stdexcept>
#include <string>

namespace mmq {

// Base for everything this library throws on purpose. Split into config
// errors (bad parameters) and data errors (bad inputs) so callers can map
// them to distinct exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public DataError {
public:
    using DataError::DataError;
};

class NonPositiveWeight : public DataError {
public:
    using DataError::DataError;
};

class PointOutsideBall : public DataError {
public:
    using DataError::DataError;
};

class EmptySupport : public DataError {
public:
    using DataError::DataError;
};

class EmptySample : public DataError {
public:
    using DataError::DataError;
};

class BatchTooSmall : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MassMismatch : public DataError {
public:
    using DataError::DataError;
};

class UnsupportedInstance : public DataError {
public:
    using DataError::DataError;
};

class TooLarge : public DataError {
public:
    using DataError::DataError;
};

class MissingLabels : public DataError {
public:
    using DataError::DataError;
};

class LengthMismatch : public DataError {
public:
    using DataError::DataError;
};

class BadThreshold : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class SpecInvalid : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NegativeArgument : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace mmq
