#pragma once

#include <stdexcept>
#include <string>

namespace h2sched {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file: wrong header, unparsable cell, truncated row.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Structurally fine input with out-of-range or inconsistent values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Rows of a time series are not in chronological hourly order.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// A required upstream artifact (benchmark run, model file) is missing.
class DependencyError : public Error {
 public:
  using Error::Error;
};

// Dispatch problem whose HPA requirement exceeds what the wind can make.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& msg, double max_attainable_kg)
      : Error(msg), max_attainable_kg(max_attainable_kg) {}
  double max_attainable_kg;
};

// Numerical method failed to converge (should not happen on sane input).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace h2sched
