#pragma once

#include <stdexcept>
#include <string>

namespace uhlab {

// Adaptive quadrature could not reach the requested tolerance; carries the
// worst remaining interval so the caller can see where the integrand misbehaves.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double lo, double hi, double err)
      : std::runtime_error(what), interval_lo(lo), interval_hi(hi), estimated_error(err) {}
  double interval_lo;
  double interval_hi;
  double estimated_error;
};

// An iterative process (Newton stage, bracketing search, ...) exhausted its
// budget; carries the last defect for diagnostics.
class IterationError : public std::runtime_error {
public:
  IterationError(const std::string& what, double last_residual_, int iterations_)
      : std::runtime_error(what), last_residual(last_residual_), iterations(iterations_) {}
  double last_residual;
  int iterations;
};

// Malformed configuration input; `path` points at the offending field.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& what, std::string path_ = {})
      : std::runtime_error(what), path(std::move(path_)) {}
  std::string path;
};

} // namespace uhlab
