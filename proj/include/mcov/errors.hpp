#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcov {

using SensorId = std::uint32_t;

/// Base of every error the library raises. `kind()` is the stable, machine
/// readable name used in CLI error lines.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define MCOV_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& message) : Error(#Name, message) {}     \
  }

MCOV_DEFINE_ERROR(DegenerateSimplex);
MCOV_DEFINE_ERROR(InconsistentDistances);
MCOV_DEFINE_ERROR(RotationMismatch);
MCOV_DEFINE_ERROR(MissingLabel);
MCOV_DEFINE_ERROR(NoFenceCycle);
MCOV_DEFINE_ERROR(InvalidRadius);
MCOV_DEFINE_ERROR(ResolutionTooCoarse);
MCOV_DEFINE_ERROR(RangeError);
MCOV_DEFINE_ERROR(IoError);

#undef MCOV_DEFINE_ERROR

/// Raised by the alpha complex or Delaunay construction when a cocircular or
/// collinear configuration is met among real input points.
class DegenerateConfiguration : public Error {
 public:
  DegenerateConfiguration(const std::string& message, std::vector<SensorId> ids)
      : Error("DegenerateConfiguration", message), ids_(std::move(ids)) {}

  const std::vector<SensorId>& ids() const noexcept { return ids_; }

 private:
  std::vector<SensorId> ids_;
};

/// Configuration file does not match the documented schema. `path()` is a
/// JSON pointer to the offending key.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error("SchemaError", message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace mcov
