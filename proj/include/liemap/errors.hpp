#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liemap {

// Matrix-exponential series failed to reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  double residual;
  ConvergenceError(const std::string& msg, double achieved)
      : std::runtime_error(msg), residual(achieved) {}
};

// Iteration produced a non-finite state; last_valid is the index of the last
// finite sample.
class DivergenceError : public std::runtime_error {
 public:
  std::size_t last_valid;
  DivergenceError(const std::string& msg, std::size_t last)
      : std::runtime_error(msg), last_valid(last) {}
};

}  // namespace liemap
