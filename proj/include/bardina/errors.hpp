#pragma once

#include <stdexcept>
#include <string>

namespace bardina {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid truncation, parameter range, or configuration key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Spectral index outside the plan's truncation.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Grid or coefficient array does not match the plan.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGeometryError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state encountered while time stepping.
class DivergenceError : public Error {
 public:
  DivergenceError(double t, const std::string& what)
      : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Tangent ensemble lost rank during orthonormalization.
class DegenerateEnsembleError : public Error {
 public:
  using Error::Error;
};

class CorruptSnapshotError : public Error {
 public:
  using Error::Error;
};

class SnapshotMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace bardina
