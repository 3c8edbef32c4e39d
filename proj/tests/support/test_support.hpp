#pragma once

// Shared fixtures: hand-built networks, random reachable states and a state
// validity check used by both the unit tests and the acceptance runner.

#include <cmath>
#include <string>
#include <vector>

#include "dispatchsim/actions.hpp"
#include "dispatchsim/dynamics.hpp"
#include "dispatchsim/errors.hpp"
#include "dispatchsim/network.hpp"
#include "dispatchsim/policies.hpp"
#include "dispatchsim/simulator.hpp"
#include "dispatchsim/state.hpp"

namespace testsupport {

using namespace dispatchsim;

inline Network make_network(std::vector<Location> machines,
                            std::vector<Location> stations, double lambda,
                            double mu, double TL) {
  Network n;
  n.machines = std::move(machines);
  n.stations = std::move(stations);
  n.lambda = lambda;
  n.mu = mu;
  n.time_limit = TL;
  n.travel = build_travel_matrix(n.machines, n.stations);
  return n;
}

// Four machines, two stations, pythagorean distances where it matters.
inline Network small_net(double lambda = 0.01, double mu = 0.1,
                         double TL = 10.0) {
  return make_network({{0, 0}, {3, 4}, {6, 0}, {0, 5}}, {{0, 1}, {5, 1}},
                      lambda, mu, TL);
}

// All machines working, engineers resident at their stations. The event is
// a placeholder; callers overwrite it when they need a decision state.
inline SystemState fresh_state(const Network& net, const Allocation& alloc) {
  SystemState s;
  s.machines.assign(static_cast<size_t>(net.K()), MachineStatus::working());
  for (int r : alloc.station_of_engineer)
    s.engineers.push_back({net.station_loc(r), 0.0});
  return s;
}

// Picks uniformly among the feasible actions; drives the reachable-state
// sampler into corners that sensible policies avoid.
class RandomActionPolicy final : public Policy {
 public:
  Action decide(const SystemState& s, const Network& net,
                RngStream& rng) override {
    enumerate_actions_into(s, net, actions_);
    return actions_[rng.below(static_cast<std::uint32_t>(actions_.size()))];
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<RandomActionPolicy>(*this);
  }
  const char* name() const override { return "random_action"; }

 private:
  std::vector<Action> actions_;
};

// Decision states visited by random play, `want` of them.
inline std::vector<SystemState> reachable_states(const Network& net,
                                                 const Allocation& alloc,
                                                 int want,
                                                 std::uint64_t seed) {
  std::vector<SystemState> out;
  out.reserve(static_cast<size_t>(want));
  RandomActionPolicy policy;
  for (std::uint64_t rep = 0; static_cast<int>(out.size()) < want; ++rep) {
    SimConfig cfg;
    cfg.horizon = 5000.0;
    cfg.master_seed = derive_seed(seed, rep);
    try {
      simulate(net, alloc, policy, cfg,
               [&](const SystemState& s, const Action&, const SystemState&,
                   const CostBreakdown&) {
                 if (static_cast<int>(out.size()) < want) out.push_back(s);
               });
    } catch (const AbsorbingState&) {
      // Random play queued the last failure with nobody moving; the states
      // collected up to that point are still legitimate.
    }
  }
  return out;
}

// Empty string when the state is internally consistent, else a complaint.
inline std::string state_flaw(const SystemState& s, const Network& net) {
  if (s.K() != net.K()) return "machine count mismatch";
  for (const auto& m : s.machines) {
    if (m.kind == MachineKind::Waiting &&
        !(m.waiting >= 0.0 && std::isfinite(m.waiting)))
      return "bad waiting clock";
  }
  for (const auto& e : s.engineers) {
    if (e.dest < 0 || e.dest >= net.L()) return "destination out of range";
    if (!(e.remaining >= 0.0) || !std::isfinite(e.remaining))
      return "bad remaining time";
  }
  const int loc = s.event.location;
  switch (s.event.type) {
    case EventType::Failure:
      if (loc < 0 || loc >= s.K()) return "failure location out of range";
      if (s.machines[static_cast<size_t>(loc)].kind != MachineKind::Waiting)
        return "failed machine not waiting";
      break;
    case EventType::RepairEnd:
      if (loc < 0 || loc >= s.K()) return "repair location out of range";
      if (s.machines[static_cast<size_t>(loc)].kind != MachineKind::Working)
        return "repaired machine not working";
      break;
    case EventType::ArriveStation: {
      if (loc < s.K() || loc >= net.L()) return "station location out of range";
      bool resident = false;
      for (const auto& e : s.engineers)
        resident = resident || (e.dest == loc && e.remaining == 0.0);
      if (!resident) return "no engineer resident at arrival station";
      break;
    }
    case EventType::ArriveMachine: {
      if (loc < 0 || loc >= s.K()) return "machine location out of range";
      if (s.machines[static_cast<size_t>(loc)].kind != MachineKind::InRepair)
        return "arrival machine not in repair";
      bool resident = false;
      for (const auto& e : s.engineers)
        resident = resident || (e.dest == loc && e.remaining == 0.0);
      if (!resident) return "no engineer resident at arrival machine";
      break;
    }
  }
  return {};
}

}  // namespace testsupport
