#pragma once

#include <stdexcept>
#include <string>

namespace stackplace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transforms or wrenches were combined across mismatched frames.
class FrameMismatch : public Error {
 public:
  using Error::Error;
};

/// The normal force is too small to estimate a contact ("not pressed hard enough").
class DegenerateNormalForce : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class CalibrationIncomplete : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// The descent used up its height budget without reaching the resistance threshold.
class NoContactWithinRange : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario file. The message carries the field path or line/column.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace stackplace
