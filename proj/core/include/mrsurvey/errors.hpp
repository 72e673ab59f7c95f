#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mrsurvey {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid sampling design parameters (n > N, nonpositive sizes, ...).
class InvalidDesignError : public Error {
 public:
  using Error::Error;
};

// A value required by an operation is missing (e.g. y absent for a
// respondent, or a complete-data operation fed a missing value).
class IncompleteDataError : public Error {
 public:
  using Error::Error;
};

// A unit id was requested that is not a member of the sample.
class NotInSampleError : public Error {
 public:
  using Error::Error;
};

// An iterative fit failed to converge. Carries the iteration trace
// (score max-norm per iteration) for diagnosis.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, std::vector<double> trace)
      : Error(msg), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

// A linear system that must be solved is rank deficient. The message names
// the block (which model / which equation).
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

// Score compression is undefined (all regression coefficients zero).
class DegenerateCompressionError : public Error {
 public:
  using Error::Error;
};

// Calibration cannot proceed (zero denominator, nonpositive imputed values).
class DegenerateCalibrationError : public Error {
 public:
  using Error::Error;
};

// The calibration target is outside the attainable range of the chosen
// bounded distance. Carries the attainable open interval.
class InfeasibleCalibrationError : public Error {
 public:
  InfeasibleCalibrationError(const std::string& msg, double lo, double hi)
      : Error(msg), lo_(lo), hi_(hi) {}
  double attainable_lo() const { return lo_; }
  double attainable_hi() const { return hi_; }

 private:
  double lo_, hi_;
};

// Bad scenario / population / model configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Undefined summary metric (e.g. relative bias with a zero true total).
class MetricError : public Error {
 public:
  using Error::Error;
};

// Malformed tabular input. Row numbers are 1-based and count the header.
class InputError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (cannot open/read/write a file).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrsurvey
