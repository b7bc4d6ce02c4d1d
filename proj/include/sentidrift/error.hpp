#pragma once

#include <stdexcept>
#include <string>

namespace sentidrift {

/// A single value or record could not be parsed. Callers usually report and skip.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (window size 0, alpha <= 0, bad duration string).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sentidrift
