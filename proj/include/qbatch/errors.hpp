#pragma once

#include <stdexcept>
#include <string>

namespace qbatch {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument or contract violation at a public API boundary.
struct ParameterError : Error {
    using Error::Error;
};

// Input exceeds a hard resource cap (qubit count, node count, payload size).
struct CapacityError : Error {
    using Error::Error;
};

// Numerical routine failed to converge or produced a non-finite result.
struct NumericError : Error {
    using Error::Error;
};

// A precondition on program state was violated (e.g. sampling an unmeasured circuit).
struct ContractError : Error {
    using Error::Error;
};

// Missing or inconsistent configuration (profiles, addresses, files).
struct ConfigError : Error {
    using Error::Error;
};

// Persisted data failed a checksum or structural validation.
struct IntegrityError : Error {
    using Error::Error;
};

// Lookup of a job, worker, or record that does not exist.
struct NotFoundError : Error {
    using Error::Error;
};

// Clustering could not satisfy the qubit cap.
struct PartitionError : Error {
    using Error::Error;
};

// Backend calibration could not fit a runtime model.
struct CalibrationError : Error {
    using Error::Error;
};

}  // namespace qbatch
