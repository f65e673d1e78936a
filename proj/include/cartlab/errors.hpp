#pragma once

#include <stdexcept>

namespace cartlab {

// Caller-supplied value violates a documented precondition.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed configuration file; the message carries location diagnostics.
struct ConfigError : InputError {
    using InputError::InputError;
};

// Operation invoked on an object in the wrong state (e.g. an unfitted tree).
struct StateError : std::logic_error {
    using std::logic_error::logic_error;
};

// A hard resource cap (enumeration size) would be exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two routes that must agree exactly disagreed.
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cartlab
