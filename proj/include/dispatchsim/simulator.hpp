#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dispatchsim/dynamics.hpp"
#include "dispatchsim/network.hpp"
#include "dispatchsim/policy.hpp"

namespace dispatchsim {

struct SimConfig {
  double horizon = 0.0;
  double epsilon = 0.01;
  std::uint64_t master_seed = 0;
  double warmup = 0.0;  // metrics ignore anything before this time
};

struct SimMetrics {
  long long incidents = 0;  // failures inside [warmup, horizon)
  long long late = 0;
  double cost_total = 0.0;
  double response_time_sum = 0.0;
  double flar = 0.0;
  double art = 0.0;
  double cost_per_incident = 0.0;
  bool no_incidents = false;  // ratios above are 0-filled, not meaningful
};

// Called once per transition with the decision state, the action taken, the
// landed state, and the unwindowed cost of that transition.
using TraceSink = std::function<void(const SystemState&, const Action&,
                                     const SystemState&, const CostBreakdown&)>;

// Runs one trajectory: all engineers start idle at their allocated stations,
// all machines working, and the first decision happens at the first failure.
// Unit penalties count when the TL crossing falls inside [warmup, horizon);
// overtime is clipped to that window. An incident still unresolved at the
// horizon counts (as late) only if its waiting time already exceeds TL.
// Throws PolicyContractViolation when the policy returns an inadmissible
// action.
SimMetrics simulate(const Network& net, const Allocation& alloc,
                    Policy& policy, const SimConfig& cfg,
                    const TraceSink& sink = nullptr);

struct Aggregate {
  double mean_incidents = 0.0, mean_late = 0.0, mean_cost_total = 0.0;
  double mean_flar = 0.0, se_flar = 0.0;
  double mean_art = 0.0, se_art = 0.0;
  double mean_cost_per_incident = 0.0, se_cost_per_incident = 0.0;
};

struct ReplicationResult {
  std::vector<SimMetrics> reps;
  Aggregate agg;
};

// Independent replications; replication i runs with master seed
// derive_seed(cfg.master_seed, i), so the list does not depend on the thread
// count or completion order.
ReplicationResult replicate(const Network& net, const Allocation& alloc,
                            const Policy& policy, const SimConfig& cfg,
                            int n_reps, int threads = 1);

}  // namespace dispatchsim
