#pragma once

#include <limits>
#include <vector>

#include "dispatchsim/actions.hpp"
#include "dispatchsim/rng.hpp"
#include "dispatchsim/state.hpp"

namespace dispatchsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Law of the next event from a post-decision state: an exponential race at
// rate eta = lambda|W| + mu|H| against the nearest pending arrival d_min.
struct TransitionLaw {
  double eta = 0.0;
  double lambda_w = 0.0;  // lambda * |W|
  double mu_h = 0.0;      // mu * |H|
  double d_min = kInf;
  std::vector<int> failure_candidates;  // working machines
  std::vector<int> repair_candidates;   // machines in repair
  int arrival_engineer = -1;            // achiever of d_min, lowest index on ties
  EventType arrival_event = EventType::ArriveStation;  // valid iff arrival_engineer >= 0

  // Closed-form outcome probabilities; they sum to 1 over all outcomes.
  double p_arrival() const;        // exp(-eta*d_min), 0 without an arrival
  double p_failure_each() const;   // per working machine
  double p_repair_each() const;    // per in-repair machine
};

// A pending arrival is an engineer with remaining > 0, or with remaining == 0
// heading to a still-Waiting machine (a zero-length dispatch leg that must
// still fire its ArriveMachine event). Engineers resident at stations or at
// machines they repair are not pending. Throws AbsorbingState when eta == 0
// and there is no pending arrival.
TransitionLaw transition_law(const SystemState& s_post, const Network& net);
void transition_law_into(const SystemState& s_post, const Network& net,
                         TransitionLaw& law);

// Draws the next event per the law and advances clocks in place: time and
// waiting clocks grow by elapsed, traveler remaining times shrink. Draw order
// is fixed: exponential race, then outcome type, then uniform member.
double advance_in_place(SystemState& s, const TransitionLaw& law,
                        RngStream& rng);

// apply_action + transition_law + advance. Returns (next state, elapsed).
std::pair<SystemState, double> sample_transition(const SystemState& s,
                                                 const Action& a,
                                                 const Network& net,
                                                 RngStream& rng);

struct CostBreakdown {
  int unit_penalties = 0;
  double overtime = 0.0;  // D: waiting time beyond TL accrued this transition
  double total = 0.0;     // unit_penalties + epsilon * overtime
};

// Per-transition cost. A unit penalty is charged for each machine whose
// waiting clock crosses TL during the transition while it was still waiting —
// including when the same transition ends with the engineer's arrival.
// Overtime D collects waiting beyond TL accrued in (t, t+elapsed].
CostBreakdown transition_cost(const SystemState& s, const SystemState& s_next,
                              double time_limit, double epsilon);

}
