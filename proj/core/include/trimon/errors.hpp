#pragma once

#include <stdexcept>
#include <string>

namespace trimon {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: non-positive capacitances, malformed probabilities, unknown labels.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A dispersive denominator vanished.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class InsufficientStatistics : public Error {
 public:
  using Error::Error;
};

class DegenerateParameters : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class UnderdeterminedFit : public FitError {
 public:
  using FitError::FitError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace trimon
