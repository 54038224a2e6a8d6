#pragma once

#include <stdexcept>
#include <string>

namespace fibernn {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// NaN or infinity where a finite value is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A feature whose training range collapses to a single value.
class DegenerateFeature : public Error {
 public:
  DegenerateFeature(std::string feature, const std::string& what)
      : Error(what), feature_(std::move(feature)) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

// The network contains an activation that breaks the single-matrix collapse.
class NotCollapsible : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Field energy reaches the edge of the simulated frequency grid.
class AliasingError : public Error {
 public:
  using Error::Error;
};

class EmptyReadout : public Error {
 public:
  using Error::Error;
};

// Wraps a failure with the pipeline stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace fibernn
