#include <vector>

#include "dispatchsim/estimates.hpp"
#include "dispatchsim/policies.hpp"

namespace dispatchsim {

namespace {

int closest_queued(const SystemState& s, const Network& net, int from) {
  int best = -1;
  for (int k = 0; k < s.K(); ++k) {
    if (s.machines[k].kind != MachineKind::Waiting || machine_assigned(s, k))
      continue;
    if (best < 0 || net.travel_at(from, k) < net.travel_at(from, best))
      best = k;
  }
  return best;
}

std::vector<int> working_machines(const SystemState& s) {
  std::vector<int> w;
  for (int k = 0; k < s.K(); ++k)
    if (s.machines[k].kind == MachineKind::Working) w.push_back(k);
  return w;
}

}  // namespace

Action heuristic_policy(const SystemState& s, const Network& net,
                        const HeuristicParams& params) {
  switch (s.event.type) {
    case EventType::Failure: {
      const int k0 = s.event.location;
      int best = 0;
      double best_rt = response_time_estimate(s, net, k0, 0, params.percentile);
      for (int m = 1; m < s.M(); ++m) {
        const double rt =
            response_time_estimate(s, net, k0, m, params.percentile);
        if (rt < best_rt) {
          best = m;
          best_rt = rt;
        }
      }
      if (!net.is_station_loc(s.engineers[best].dest))
        return {ActionType::Queue, -1, -1, -1, -1};  // best option is busy
      Action a;
      a.type = ActionType::DispatchAndMaybeRelocate;
      a.dispatch = best;
      // Coverage-repair step: find the station pair whose relocation gains
      // the most expected covered demand in the post-dispatch configuration.
      const std::vector<int> w = working_machines(s);
      if (w.empty()) return a;
      SystemState post = apply_action(s, a, net);
      const std::vector<double> P = busy_probabilities(net, s.M());
      EcdScratch scratch;
      const double base =
          expected_covered_demand_over(w, post, net, P, params.percentile, scratch);
      double best_gain = 0.0;
      int best_e = -1, best_r2 = -1;
      for (int r1 = 0; r1 < net.R(); ++r1) {
        int e1 = -1;
        for (int m = 0; m < s.M(); ++m)
          if (post.engineers[m].dest == net.station_loc(r1) &&
              post.engineers[m].remaining == 0.0) {
            e1 = m;
            break;
          }
        if (e1 < 0) continue;  // nobody idle stationary here
        for (int r2 = 0; r2 < net.R(); ++r2) {
          if (r2 == r1 ||
              net.travel_at(net.station_loc(r1), net.station_loc(r2)) >
                  params.T2)
            continue;
          // Coverage is judged with the mover already at the target base
          // (the configuration the relocation is buying); charging the trip
          // here would void every move by the triangle inequality.
          post.engineers[e1] = {net.station_loc(r2), 0.0};
          const double ecd = expected_covered_demand_over(
              w, post, net, P, params.percentile, scratch);
          if (ecd - base > best_gain) {
            best_gain = ecd - base;
            best_e = e1;
            best_r2 = r2;
          }
          post.engineers[e1] = {net.station_loc(r1), 0.0};
        }
      }
      if (best_e >= 0 && best_gain > params.delta) {
        a.relocate_engineer = best_e;
        a.relocate_station = best_r2;
      }
      return a;
    }
    case EventType::RepairEnd: {
      const int k0 = s.event.location;
      const int q = closest_queued(s, net, k0);
      if (q >= 0) return {ActionType::Redeploy, -1, -1, -1, q};
      std::vector<int> candidates;
      for (int r = 0; r < net.R(); ++r)
        if (net.travel_at(k0, net.station_loc(r)) <= params.T1)
          candidates.push_back(r);
      if (candidates.empty())
        for (int r = 0; r < net.R(); ++r) candidates.push_back(r);
      const std::vector<int> w = working_machines(s);
      int who = -1;
      for (int m = 0; m < s.M(); ++m)
        if (s.engineers[m].dest == k0 && s.engineers[m].remaining == 0.0)
          who = m;
      int best_r = candidates[0];
      if (!w.empty() && who >= 0 && candidates.size() > 1) {
        SystemState trial = s;
        const std::vector<double> P = busy_probabilities(net, s.M());
        EcdScratch scratch;
        double best_ecd = -1.0;
        for (int r : candidates) {
          trial.engineers[who] = {net.station_loc(r), 0.0};  // as if arrived
          const double ecd = expected_covered_demand_over(
              w, trial, net, P, params.percentile, scratch);
          if (ecd > best_ecd) {
            best_ecd = ecd;
            best_r = r;
          }
        }
      } else if (w.empty()) {
        for (int r : candidates)  // nothing to cover: shortest trip home
          if (net.travel_at(k0, net.station_loc(r)) <
              net.travel_at(k0, net.station_loc(best_r)))
            best_r = r;
      }
      return {ActionType::Redeploy, -1, -1, -1, net.station_loc(best_r)};
    }
    case EventType::ArriveStation: {
      const int q = closest_queued(s, net, s.event.location);
      if (q >= 0) return {ActionType::QueueDispatch, -1, -1, -1, q};
      return {ActionType::NoOp, -1, -1, -1, -1};  // empty queue: nothing to decide
    }
    default:
      return {ActionType::NoOp, -1, -1, -1, -1};
  }
}

}
