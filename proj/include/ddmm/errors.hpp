#ifndef DDMM_ERRORS_HPP
#define DDMM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddmm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad mesh geometry (non-positive length/section, inverted element, ...).
struct InvalidGeometryError : Error {
  using Error::Error;
};

/// Malformed input file; message carries the file name and line number.
struct ParseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// A matrix that must be symmetric positive definite is not.
struct NotSpdError : Error {
  using Error::Error;
};

/// Constraint-deficient linear system; message reports the estimated
/// null-space dimension.
struct SingularSystemError : Error {
  using Error::Error;
};

/// No datum satisfies the admissibility window of a material point.
struct StarvationError : Error {
  using Error::Error;
};

struct MismatchError : Error {
  using Error::Error;
};

}  // namespace ddmm

#endif
