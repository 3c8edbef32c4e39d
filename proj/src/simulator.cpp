#include "dispatchsim/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "dispatchsim/errors.hpp"
#include "dispatchsim/parallel.hpp"

namespace dispatchsim {

SimMetrics simulate(const Network& net, const Allocation& alloc,
                    Policy& policy, const SimConfig& cfg,
                    const TraceSink& sink) {
  const int K = net.K();
  const double TL = net.time_limit;
  RngStream event_rng(cfg.master_seed, 0);
  RngStream policy_rng(cfg.master_seed, 1);

  SystemState s;
  s.time = 0.0;
  s.machines.assign(static_cast<size_t>(K), MachineStatus::working());
  for (int r : alloc.station_of_engineer)
    s.engineers.push_back({net.station_loc(r), 0.0});
  TransitionLaw law;
  transition_law_into(s, net, law);
  advance_in_place(s, law, event_rng);  // roll to the first failure

  SimMetrics met;
  double overtime = 0.0;
  long long crossings = 0;
  std::vector<double> fail_time(static_cast<size_t>(K), -1.0);
  SystemState next;

  auto record_event = [&](const SystemState& landed) {
    const double t1 = landed.time;
    if (t1 >= cfg.horizon) return;  // past the metric window: leave pending
    const int loc = landed.event.location;
    if (landed.event.type == EventType::Failure) {
      fail_time[static_cast<size_t>(loc)] = t1;
    } else if (landed.event.type == EventType::ArriveMachine) {
      const double f = fail_time[static_cast<size_t>(loc)];
      fail_time[static_cast<size_t>(loc)] = -1.0;
      if (f >= cfg.warmup && f < cfg.horizon) {
        const double response = t1 - f;
        ++met.incidents;
        met.response_time_sum += response;
        if (response > TL) ++met.late;
      }
    }
  };
  record_event(s);

  while (s.time < cfg.horizon) {
    const Action a = policy.decide(s, net, policy_rng);
    try {
      apply_action_into(s, a, net, next);
    } catch (const InfeasibleAction& e) {
      throw PolicyContractViolation(std::string(policy.name()) + ": " +
                                    e.what());
    }
    transition_law_into(next, net, law);
    const double elapsed = advance_in_place(next, law, event_rng);
    const double t0 = s.time, t1 = next.time;
    // Window the waiting costs: a unit penalty lands at its crossing time,
    // overtime only accrues inside [warmup, horizon).
    for (int k = 0; k < K; ++k) {
      if (s.machines[k].kind != MachineKind::Waiting) continue;
      const double k0 = s.machines[k].waiting;
      if (k0 < TL && k0 + elapsed >= TL) {
        const double tc = t0 + (TL - k0);
        if (tc >= cfg.warmup && tc < cfg.horizon) ++crossings;
      }
      const double from = t0 + std::max(0.0, TL - k0);
      const double lo = std::max(from, cfg.warmup);
      const double hi = std::min(t1, cfg.horizon);
      if (hi > lo) overtime += hi - lo;
    }
    if (sink) sink(s, a, next, transition_cost(s, next, TL, cfg.epsilon));
    record_event(next);
    std::swap(s, next);
  }

  for (int k = 0; k < K; ++k) {
    const double f = fail_time[static_cast<size_t>(k)];
    if (f < cfg.warmup || f >= cfg.horizon) continue;
    const double waited = cfg.horizon - f;
    if (waited > TL) {  // unresolved and already late: count censored
      ++met.incidents;
      ++met.late;
      met.response_time_sum += waited;
    }
  }

  met.cost_total = static_cast<double>(crossings) + cfg.epsilon * overtime;
  if (met.incidents > 0) {
    const double n = static_cast<double>(met.incidents);
    met.flar = static_cast<double>(met.late) / n;
    met.art = met.response_time_sum / n;
    met.cost_per_incident = met.cost_total / n;
  } else {
    met.no_incidents = true;
  }
  return met;
}

namespace {

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / n;
  if (xs.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

ReplicationResult replicate(const Network& net, const Allocation& alloc,
                            const Policy& policy, const SimConfig& cfg,
                            int n_reps, int threads) {
  ReplicationResult out;
  out.reps.resize(static_cast<size_t>(n_reps));
  parallel_for(n_reps, threads, [&](int i) {
    auto mine = policy.clone();
    SimConfig rep_cfg = cfg;
    rep_cfg.master_seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
    out.reps[static_cast<size_t>(i)] = simulate(net, alloc, *mine, rep_cfg);
  });
  std::vector<double> flar, art, cpi;
  double mi = 0.0, ml = 0.0, mc = 0.0;
  for (const auto& m : out.reps) {
    flar.push_back(m.flar);
    art.push_back(m.art);
    cpi.push_back(m.cost_per_incident);
    mi += static_cast<double>(m.incidents);
    ml += static_cast<double>(m.late);
    mc += m.cost_total;
  }
  const double n = static_cast<double>(n_reps);
  out.agg.mean_incidents = mi / n;
  out.agg.mean_late = ml / n;
  out.agg.mean_cost_total = mc / n;
  mean_se(flar, out.agg.mean_flar, out.agg.se_flar);
  mean_se(art, out.agg.mean_art, out.agg.se_art);
  mean_se(cpi, out.agg.mean_cost_per_incident, out.agg.se_cost_per_incident);
  return out;
}

}
