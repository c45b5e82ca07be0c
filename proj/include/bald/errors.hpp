#pragma once

#include <stdexcept>
#include <string>

namespace bald {

// Error hierarchy mapped to distinct CLI exit codes (see exit_code_for).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters, flags, or violated call preconditions.
struct ConfigError : Error {
    using Error::Error;
};

// Input data that is structurally valid but semantically unusable
// (nonpositive M0 inside the mask, non-finite spectra, ...).
struct DataError : Error {
    using Error::Error;
};

// File system / serialization failures.
struct IoError : Error {
    using Error::Error;
};

// Estimation cannot proceed (e.g. every intensity bin empty).
struct EstimationError : Error {
    using Error::Error;
};

// Broken internal invariant; always a bug.
struct InternalError : Error {
    using Error::Error;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_validation = 2,
    exit_io = 3,
    exit_data = 4,
    exit_estimation = 5,
};

}  // namespace bald
