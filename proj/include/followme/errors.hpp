#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace followme {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Leader coincides with (or is too close to) a sensor anchor or the follower.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Recorded leader distance left the demonstration envelope.
class DemonstrationOutOfRange : public Error {
 public:
  DemonstrationOutOfRange(const std::string& what, std::size_t timestep)
      : Error(what), timestep(timestep) {}
  std::size_t timestep;
};

/// Not enough samples for the requested windowing or split.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Malformed row or field in a data file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line(line) {}
  std::size_t line;
};

/// Structurally valid file whose contents violate a dataset invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss encountered during gradient training.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, int epoch) : Error(what), epoch(epoch) {}
  int epoch;
};

/// Model file is truncated, version-mismatched, or shape-corrupted.
class CorruptModel : public Error {
 public:
  using Error::Error;
};

/// Tensor/feature dimensions do not agree.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (unwritable workspace, missing file).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace followme
