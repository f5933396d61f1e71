#pragma once

#include <stdexcept>
#include <string>

namespace kentsim {

/// Base for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBoost : public Error {
 public:
  using Error::Error;
};

/// A ToyConfig, grid or PWConfig violates one of its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Beable queried at or beyond the late hypersurface.
class ApexBeyondSurface : public Error {
 public:
  using Error::Error;
};

/// Operation applied to the wrong toy scenario (e.g. a Bell set where a single-system set is required).
class WrongScenario : public Error {
 public:
  using Error::Error;
};

/// Structurally malformed hidden-variable model (sizes, non-finite entries, unknown keys).
class ModelError : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

/// Pilot-wave configuration reached a point where |psi|^2 underflows.
class DegenerateNode : public Error {
 public:
  using Error::Error;
};

/// Pilot-wave outcome still unresolved after horizon extensions.
class UnresolvedOutcome : public Error {
 public:
  using Error::Error;
};

}  // namespace kentsim
