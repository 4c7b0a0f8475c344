#pragma once

#include <stdexcept>
#include <string>

namespace sharpq {

/// File could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File exists but its content is not a supported raster format.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shape mismatch between images or fields.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameter value (even kernel size, non-positive sigma, ...).
struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// NaN/Inf input or a diverged computation.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent configuration (e.g. deconv mode without a kernel).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The image admits no full analysis patch.
struct EmptyDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sharpq
