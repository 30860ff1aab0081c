#pragma once

#include <stdexcept>
#include <string>

namespace gauntlet {

/// Caller passed a value outside an operation's domain (bad index, wrong kind).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Configuration is inconsistent or unsatisfiable (bounds, presets, tables).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem or log-format failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gauntlet
