#pragma once

#include <stdexcept>
#include <string>

namespace mlnhardy {

// Bad inputs / contract violations detected before any computation. CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Failures of the computation itself (breakdown, divergence, lost positivity). CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class SolverBreakdown : public NumericalError {
 public:
  explicit SolverBreakdown(const std::string& what) : NumericalError(what) {}
};

}  // namespace mlnhardy
