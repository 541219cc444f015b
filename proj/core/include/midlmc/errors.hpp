#pragma once

#include <stdexcept>
#include <string>

namespace midlmc {

/// Invalid user-facing configuration (bad hierarchy, mismatched grids, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A simulated state or likelihood became non-finite.
class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// PDE solver failure (singular tridiagonal system, invalid grid, ...).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// State dimension not supported by this implementation.
class UnsupportedDimension : public std::runtime_error {
 public:
  explicit UnsupportedDimension(const std::string& what)
      : std::runtime_error(what) {}
};

} // namespace midlmc
