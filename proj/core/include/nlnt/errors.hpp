#pragma once

#include <stdexcept>
#include <string>

namespace nlnt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration: bad grid, unsupported kernel/grid ratio,
/// unknown option, missing kernel derivative for v2 slopes, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A kernel that cannot be normalized or evaluated.
class KernelError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite or otherwise unusable initial data.
class InputDataError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Model functions produced a non-finite value, or a model was defined
/// with inconsistent data.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Mismatched array shapes passed to a numerical routine.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The time integration failed: NaN detected or strict CFL violation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlnt
