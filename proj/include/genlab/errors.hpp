#pragma once

#include <stdexcept>

namespace genlab {

/// Invalid configuration or construction parameters.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid value passed to an operation (dimension mismatch, out-of-range).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation not defined for the given kind (e.g. label transform on regression data).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate numerics (singular solve at lambda = 0, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resource guard tripped (enumeration caps, regime requirements).
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace genlab
