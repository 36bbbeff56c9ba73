#pragma once

#include <stdexcept>
#include <string>

namespace pzp {

// Error taxonomy. Every failure mode maps to one of these; the CLI turns the
// concrete type into a stage-tagged diagnostic and a nonzero exit code.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
  using Error::Error;
};
struct DegenerateMaterialError : Error {
  using Error::Error;
};
struct DegenerateCircuitError : Error {
  using Error::Error;
};
struct GeometryError : Error {
  using Error::Error;
};
struct BoundaryConditionError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct SolverError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace pzp
