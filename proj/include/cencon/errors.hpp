#pragma once

#include <stdexcept>
#include <string>

namespace cencon {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad indices, bad file contents, invalid options.
struct InputError : Error {
  using Error::Error;
};

/// A configuration does not have the dimension an operation requires.
struct DimensionError : Error {
  using Error::Error;
};

/// A certification check failed (not central, inconsistent fit, ...).
struct CertificationError : Error {
  using Error::Error;
};

/// Numerical failure: non-realizable distances, degenerate data, solver
/// breakdown.
struct NumericError : Error {
  using Error::Error;
};

/// Two independent computations of the same quantity disagree.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace cencon
