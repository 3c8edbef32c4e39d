#include "dispatchsim/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

double TransitionLaw::p_arrival() const {
  if (d_min == 0.0) return 1.0;
  if (eta == 0.0) return d_min == kInf ? 0.0 : 1.0;
  return std::exp(-eta * d_min);
}

double TransitionLaw::p_failure_each() const {
  if (eta == 0.0) return 0.0;
  return lambda_w / eta * (1.0 - std::exp(-eta * d_min));
}

double TransitionLaw::p_repair_each() const {
  if (eta == 0.0) return 0.0;
  return mu_h / eta * (1.0 - std::exp(-eta * d_min));
}

void transition_law_into(const SystemState& s, const Network& net,
                         TransitionLaw& law) {
  law.failure_candidates.clear();
  law.repair_candidates.clear();
  law.d_min = kInf;
  law.arrival_engineer = -1;
  law.lambda_w = net.lambda;
  law.mu_h = net.mu;
  for (int k = 0; k < s.K(); ++k) {
    if (s.machines[k].kind == MachineKind::Working)
      law.failure_candidates.push_back(k);
    else if (s.machines[k].kind == MachineKind::InRepair)
      law.repair_candidates.push_back(k);
  }
  law.eta = net.lambda * static_cast<double>(law.failure_candidates.size()) +
            net.mu * static_cast<double>(law.repair_candidates.size());
  for (int m = 0; m < s.M(); ++m) {
    const auto& e = s.engineers[m];
    double d;
    if (e.remaining > 0.0) {
      d = e.remaining;
    } else if (e.dest < s.K() &&
               s.machines[e.dest].kind == MachineKind::Waiting) {
      d = 0.0;  // co-located with a waiting machine: arrives immediately
    } else {
      continue;  // idle stationary, or already repairing: nothing pending
    }
    if (d < law.d_min) {
      law.d_min = d;
      law.arrival_engineer = m;
      law.arrival_event = e.dest < s.K() ? EventType::ArriveMachine
                                         : EventType::ArriveStation;
    }
  }
  if (law.eta == 0.0 && law.arrival_engineer < 0)
    throw AbsorbingState("no machine active and no engineer moving");
}

TransitionLaw transition_law(const SystemState& s, const Network& net) {
  TransitionLaw law;
  transition_law_into(s, net, law);
  return law;
}

double advance_in_place(SystemState& s, const TransitionLaw& law,
                        RngStream& rng) {
  // Draw order is fixed (holding time, event type, member) so that replays
  // are bitwise reproducible.
  const double gamma = rng.exponential(law.eta);
  double elapsed;
  Event ev;
  int repaired = -1;   // machine entering repair (arrival)
  int failed = -1;     // machine failing
  int recovered = -1;  // machine whose repair ends
  if (gamma >= law.d_min) {
    elapsed = law.d_min;
    ev.type = law.arrival_event;
    ev.location = s.engineers[law.arrival_engineer].dest;
    if (ev.type == EventType::ArriveMachine) repaired = ev.location;
  } else {
    elapsed = gamma;
    const double p_fail =
        law.lambda_w * static_cast<double>(law.failure_candidates.size()) /
        law.eta;
    if (rng.uniform() < p_fail) {
      failed = law.failure_candidates[rng.below(
          static_cast<std::uint32_t>(law.failure_candidates.size()))];
      ev = {EventType::Failure, failed};
    } else {
      recovered = law.repair_candidates[rng.below(
          static_cast<std::uint32_t>(law.repair_candidates.size()))];
      ev = {EventType::RepairEnd, recovered};
    }
  }
  s.time += elapsed;
  for (auto& mk : s.machines)
    if (mk.kind == MachineKind::Waiting) mk.waiting += elapsed;
  for (int m = 0; m < s.M(); ++m) {
    auto& e = s.engineers[m];
    if (e.remaining > 0.0) e.remaining = std::max(0.0, e.remaining - elapsed);
  }
  if (repaired >= 0) {
    s.engineers[law.arrival_engineer].remaining = 0.0;
    s.machines[repaired] = MachineStatus::in_repair();
  } else if (ev.type == EventType::ArriveStation) {
    s.engineers[law.arrival_engineer].remaining = 0.0;
  } else if (failed >= 0) {
    s.machines[failed] = MachineStatus::waiting_for(0.0);
  } else if (recovered >= 0) {
    s.machines[recovered] = MachineStatus::working();
  }
  s.event = ev;
  return elapsed;
}

std::pair<SystemState, double> sample_transition(const SystemState& s,
                                                 const Action& a,
                                                 const Network& net,
                                                 RngStream& rng) {
  SystemState next = apply_action(s, a, net);
  TransitionLaw law;
  transition_law_into(next, net, law);
  const double elapsed = advance_in_place(next, law, rng);
  return {std::move(next), elapsed};
}

CostBreakdown transition_cost(const SystemState& s, const SystemState& s_next,
                              double time_limit, double epsilon) {
  CostBreakdown c;
  const double elapsed = s_next.time - s.time;
  const bool arrival = s_next.event.type == EventType::ArriveMachine;
  for (int k = 0; k < s.K(); ++k) {
    if (s.machines[k].kind != MachineKind::Waiting) continue;
    const double k0 = s.machines[k].waiting;
    const double k1 = k0 + elapsed;
    const bool ended = arrival && s_next.event.location == k;
    if (!ended && s_next.machines[k].kind != MachineKind::Waiting)
      continue;  // cannot happen: only an arrival ends a wait
    if (k0 < time_limit && k1 >= time_limit) ++c.unit_penalties;
    if (k1 > time_limit)
      c.overtime += std::max(0.0, std::min(elapsed, k1 - time_limit));
  }
  c.total = static_cast<double>(c.unit_penalties) + epsilon * c.overtime;
  return c;
}

}
