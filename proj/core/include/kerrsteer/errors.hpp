#pragma once

#include <stdexcept>
#include <string>

namespace kerrsteer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: configuration files, parameter validation, grid/window misuse.
/// The CLI maps this family to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyGrid : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class WindowTooShort : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical failure of a well-posed request. The CLI maps this family to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceDetected : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularJacobian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnstablePoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonHermitianResidual : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnphysicalCovariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TrajectoryDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kerrsteer
