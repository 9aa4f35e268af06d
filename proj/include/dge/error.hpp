#pragma once

#include <stdexcept>
#include <string>

namespace dge {

// Base of every error thrown by the library. The CLI maps ConfigError to
// exit code 2 and everything else derived from DataError to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct IoError : DataError {
    using DataError::DataError;
};

// CSV cell that cannot be parsed; message carries row/column location.
struct ParseError : DataError {
    using DataError::DataError;
};

struct SchemaMismatch : DataError {
    using DataError::DataError;
};

struct MissingLabel : DataError {
    using DataError::DataError;
};

struct EmptyClass : DataError {
    using DataError::DataError;
};

struct DegenerateSplit : DataError {
    using DataError::DataError;
};

struct BadSpec : ConfigError {
    using ConfigError::ConfigError;
};

struct InsufficientData : DataError {
    using DataError::DataError;
};

struct SingularCovariance : DataError {
    using DataError::DataError;
};

struct UnsupportedSchema : DataError {
    using DataError::DataError;
};

struct SingleClassTrainingSet : DataError {
    using DataError::DataError;
};

struct NonFiniteLoss : DataError {
    using DataError::DataError;
};

struct SingleClass : DataError {
    using DataError::DataError;
};

struct InsufficientSamples : DataError {
    using DataError::DataError;
};

struct InsufficientDatasets : DataError {
    using DataError::DataError;
};

struct DimensionError : DataError {
    using DataError::DataError;
};

struct ManifestMismatch : DataError {
    using DataError::DataError;
};

struct NoSubgroups : DataError {
    using DataError::DataError;
};

}  // namespace dge
