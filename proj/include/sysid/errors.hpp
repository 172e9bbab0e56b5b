#ifndef SYSID_ERRORS_HPP
#define SYSID_ERRORS_HPP

#include <stdexcept>
#include <string>

#include "sysid/types.hpp"

namespace sysid {

// Bad numeric input: non-finite entries, shape mismatches.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rejected experiment or generator configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stated assumption does not hold for the requested parameters.
class AssumptionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// State blow-up during simulation; carries the first offending step.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, Index step)
      : std::runtime_error(what), step_(step) {}
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

// Solver gave up inside its iteration budget; carries the best iterate found
// and the residual optimality gap estimate.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Matrix best_iterate, double objective,
              double gap)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        objective_(objective),
        gap_(gap) {}
  const Matrix& best_iterate() const noexcept { return best_iterate_; }
  double objective() const noexcept { return objective_; }
  double gap() const noexcept { return gap_; }

 private:
  Matrix best_iterate_;
  double objective_;
  double gap_;
};

}  // namespace sysid

#endif
