#ifndef RBFGAN_ERRORS_HPP
#define RBFGAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbfgan {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape disagreement between operands; message names both shapes.
struct DimensionError : Error {
  using Error::Error;
};

// A scalar argument violates its contract (negative count, sigma below the
// floor, bad ratio, ...).
struct ParameterError : Error {
  using Error::Error;
};

// NaN/Inf reached a public operation, or training diverged.
struct NumericError : Error {
  using Error::Error;
};

// A metric is undefined for the given inputs (all rows excluded, zero
// reference deviation).
struct MetricError : Error {
  using Error::Error;
};

// Request exceeds a documented cap (grid too large).
struct ResourceError : Error {
  using Error::Error;
};

// PDE solve rejected: grid resolution unusable for the given data.
struct ResolutionError : Error {
  using Error::Error;
};

// Bad user-facing configuration: config file, CLI flag, architecture string.
struct ConfigError : Error {
  using Error::Error;
};

// Architecture grammar violation; carries the character position.
struct ArchParseError : ConfigError {
  ArchParseError(const std::string& msg, std::size_t pos)
      : ConfigError(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// Anything wrong with external data: files, CSV cells, schemas, checkpoints.
struct DataError : Error {
  using Error::Error;
};

struct IoError : DataError {
  using DataError::DataError;
};

// CSV problem addressed by row and column.
struct CsvError : DataError {
  using DataError::DataError;
};

// Column set or header does not match the declared schema.
struct SchemaError : DataError {
  using DataError::DataError;
};

struct CheckpointError : DataError {
  using DataError::DataError;
};

struct CheckpointVersionError : CheckpointError {
  using CheckpointError::CheckpointError;
};

struct CheckpointFormatError : CheckpointError {
  using CheckpointError::CheckpointError;
};

struct CheckpointShapeError : CheckpointError {
  using CheckpointError::CheckpointError;
};

}  // namespace rbfgan

#endif  // RBFGAN_ERRORS_HPP
