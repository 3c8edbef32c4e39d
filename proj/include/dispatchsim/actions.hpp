#pragma once

#include <string>
#include <vector>

#include "dispatchsim/state.hpp"

namespace dispatchsim {

enum class ActionType : int {
  DispatchAndMaybeRelocate,  // failure events
  Queue,                     // failure events, no dispatch
  Redeploy,                  // repair-end events
  QueueDispatch,             // station arrivals with a non-empty queue
  StayIdle,                  // station arrivals
  NoOp,                      // machine arrivals; station arrivals, empty queue
};

struct Action {
  ActionType type = ActionType::NoOp;
  int dispatch = -1;           // engineer sent to the failed machine
  int relocate_engineer = -1;  // optional second engineer, -1 = none
  int relocate_station = -1;   // station index [0,R) the relocator moves to
  int target = -1;  // Redeploy: location index; QueueDispatch: machine index
};

bool operator==(const Action& a, const Action& b);
std::string action_to_string(const Action& a);

// Feasible actions for the state's event, in a fixed deterministic order:
// dispatching engineer ascending, then relocating engineer ascending, then
// relocation/redeploy target ascending; Queue/StayIdle/NoOp last.
std::vector<Action> enumerate_actions(const SystemState& s, const Network& net);
void enumerate_actions_into(const SystemState& s, const Network& net,
                            std::vector<Action>& out);

// Post-decision state: only the engineers named in the action change. A
// dispatched traveling engineer keeps its remaining time and adds the leg
// from its current destination (it first reaches that point, then departs).
// Throws InfeasibleAction when the action is not admissible for s.
SystemState apply_action(const SystemState& s, const Action& a,
                         const Network& net);
void apply_action_into(const SystemState& s, const Action& a,
                       const Network& net, SystemState& out);

}
