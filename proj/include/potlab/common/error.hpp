#pragma once

#include <stdexcept>
#include <string>

namespace potlab {

// Base class for every potlab error. The CLI maps subclasses onto exit codes:
// config/usage -> 1, data/schema -> 2, numerical/algorithmic -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// usage / configuration
struct ConfigError : Error { using Error::Error; };
struct InvalidArgumentError : Error { using Error::Error; };

// data / schema
struct SchemaError : Error { using Error::Error; };
struct EncodingError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// game engine
struct InvalidActionError : Error { using Error::Error; };
struct MalformedPolicyError : Error { using Error::Error; };
struct UnsupportedSpaceError : Error { using Error::Error; };
struct InconsistentObservationsError : Error { using Error::Error; };

// numerics / algorithms
struct DegenerateDataError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct NoProgressError : Error { using Error::Error; };

}  // namespace potlab
