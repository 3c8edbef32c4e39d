#pragma once

#include <stdexcept>

namespace dispatchsim {

// Network generation exhausted its rejection-sampling budget.
struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An action outside the feasible set of the current event was applied.
struct InfeasibleAction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No stochastic event and no pending arrival: the process cannot move.
struct AbsorbingState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A policy handed the simulator an inadmissible action.
struct PolicyContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expected covered demand is undefined when no machine is working.
struct EmptyWorkingSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file or flag value; the CLI maps this to exit code 2.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}
