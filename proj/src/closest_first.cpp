#include "dispatchsim/policies.hpp"

namespace dispatchsim {

Action closest_first(const SystemState& s, const Network& net) {
  switch (s.event.type) {
    case EventType::Failure: {
      const int k0 = s.event.location;
      int best = -1;
      double best_rt = 0.0;
      for (int m = 0; m < s.M(); ++m) {
        const auto& e = s.engineers[m];
        if (!net.is_station_loc(e.dest)) continue;
        const double rt = e.remaining + net.travel_at(e.dest, k0);
        if (best < 0 || rt < best_rt) {
          best = m;
          best_rt = rt;
        }
      }
      if (best < 0) return {ActionType::Queue, -1, -1, -1, -1};
      Action a;
      a.type = ActionType::DispatchAndMaybeRelocate;
      a.dispatch = best;
      return a;
    }
    case EventType::RepairEnd: {
      int fifo = -1;
      for (int k = 0; k < s.K(); ++k)
        if (s.machines[k].kind == MachineKind::Waiting &&
            !machine_assigned(s, k) &&
            (fifo < 0 || s.machines[k].waiting > s.machines[fifo].waiting))
          fifo = k;
      if (fifo >= 0) return {ActionType::Redeploy, -1, -1, -1, fifo};
      const int k0 = s.event.location;
      int best_r = 0;
      for (int r = 1; r < net.R(); ++r)
        if (net.travel_at(k0, net.station_loc(r)) <
            net.travel_at(k0, net.station_loc(best_r)))
          best_r = r;
      return {ActionType::Redeploy, -1, -1, -1, net.station_loc(best_r)};
    }
    case EventType::ArriveStation: {
      int fifo = -1;
      for (int k = 0; k < s.K(); ++k)
        if (s.machines[k].kind == MachineKind::Waiting &&
            !machine_assigned(s, k) &&
            (fifo < 0 || s.machines[k].waiting > s.machines[fifo].waiting))
          fifo = k;
      if (fifo >= 0) return {ActionType::QueueDispatch, -1, -1, -1, fifo};
      return {ActionType::NoOp, -1, -1, -1, -1};  // empty queue: nothing to decide
    }
    default:
      return {ActionType::NoOp, -1, -1, -1, -1};
  }
}

}
