#include "dispatchsim/actions.hpp"

#include <string>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

bool operator==(const Action& a, const Action& b) {
  if (a.type != b.type) return false;
  switch (a.type) {
    case ActionType::DispatchAndMaybeRelocate:
      return a.dispatch == b.dispatch &&
             a.relocate_engineer == b.relocate_engineer &&
             (a.relocate_engineer < 0 ||
              a.relocate_station == b.relocate_station);
    case ActionType::Redeploy:
    case ActionType::QueueDispatch:
      return a.target == b.target;
    default:
      return true;
  }
}

std::string action_to_string(const Action& a) {
  switch (a.type) {
    case ActionType::DispatchAndMaybeRelocate: {
      std::string s = "dispatch(" + std::to_string(a.dispatch) + ")";
      if (a.relocate_engineer >= 0)
        s += "+relocate(" + std::to_string(a.relocate_engineer) + "->s" +
             std::to_string(a.relocate_station) + ")";
      return s;
    }
    case ActionType::Queue: return "queue";
    case ActionType::Redeploy: return "redeploy(" + std::to_string(a.target) + ")";
    case ActionType::QueueDispatch:
      return "queue_dispatch(" + std::to_string(a.target) + ")";
    case ActionType::StayIdle: return "stay_idle";
    default: return "noop";
  }
}

namespace {

bool in_queue(const SystemState& s, int k) {
  return s.machines[k].kind == MachineKind::Waiting && !machine_assigned(s, k);
}

}  // namespace

void enumerate_actions_into(const SystemState& s, const Network& net,
                            std::vector<Action>& out) {
  out.clear();
  const int K = net.K(), R = net.R();
  switch (s.event.type) {
    case EventType::Failure: {
      for (int m = 0; m < s.M(); ++m) {
        if (!net.is_station_loc(s.engineers[m].dest)) continue;  // not idle
        Action d;
        d.type = ActionType::DispatchAndMaybeRelocate;
        d.dispatch = m;
        out.push_back(d);
        for (int m2 = 0; m2 < s.M(); ++m2) {
          if (m2 == m || !net.is_station_loc(s.engineers[m2].dest) ||
              s.engineers[m2].remaining != 0.0)
            continue;  // relocation is for other idle stationary engineers
          const int own = s.engineers[m2].dest - K;
          for (int r = 0; r < R; ++r) {
            if (r == own) continue;  // must move to another station
            Action dr = d;
            dr.relocate_engineer = m2;
            dr.relocate_station = r;
            out.push_back(dr);
          }
        }
      }
      out.push_back({ActionType::Queue, -1, -1, -1, -1});
      break;
    }
    case EventType::RepairEnd: {
      for (int r = 0; r < R; ++r)
        out.push_back({ActionType::Redeploy, -1, -1, -1, K + r});
      for (int k = 0; k < K; ++k)
        if (in_queue(s, k))
          out.push_back({ActionType::Redeploy, -1, -1, -1, k});
      break;
    }
    case EventType::ArriveStation: {
      for (int k = 0; k < K; ++k)
        if (in_queue(s, k))
          out.push_back({ActionType::QueueDispatch, -1, -1, -1, k});
      if (out.empty())
        out.push_back({ActionType::NoOp, -1, -1, -1, -1});
      else
        out.push_back({ActionType::StayIdle, -1, -1, -1, -1});
      break;
    }
    case EventType::ArriveMachine:
      out.push_back({ActionType::NoOp, -1, -1, -1, -1});
      break;
  }
}

std::vector<Action> enumerate_actions(const SystemState& s, const Network& net) {
  std::vector<Action> out;
  enumerate_actions_into(s, net, out);
  return out;
}

namespace {

[[noreturn]] void infeasible(const Action& a, const char* why) {
  throw InfeasibleAction(action_to_string(a) + ": " + why);
}

// The engineer acting at a RepairEnd or ArriveStation event: resident at the
// event location. Unique for machines; lowest index picked for stations
// (co-resident idle engineers are interchangeable).
int actor_at(const SystemState& s, int location) {
  for (int m = 0; m < s.M(); ++m)
    if (s.engineers[m].dest == location && s.engineers[m].remaining == 0.0)
      return m;
  return -1;
}

}  // namespace

void apply_action_into(const SystemState& s, const Action& a,
                       const Network& net, SystemState& out) {
  const int K = net.K(), R = net.R();
  out = s;
  switch (a.type) {
    case ActionType::DispatchAndMaybeRelocate: {
      if (s.event.type != EventType::Failure) infeasible(a, "not a failure event");
      const int k0 = s.event.location;
      if (a.dispatch < 0 || a.dispatch >= s.M()) infeasible(a, "bad engineer");
      auto& e = out.engineers[a.dispatch];
      if (!net.is_station_loc(e.dest)) infeasible(a, "engineer not idle");
      if (a.relocate_engineer >= 0) {
        if (a.relocate_engineer >= s.M() || a.relocate_engineer == a.dispatch)
          infeasible(a, "bad relocator");
        auto& e2 = out.engineers[a.relocate_engineer];
        if (!net.is_station_loc(e2.dest) || e2.remaining != 0.0)
          infeasible(a, "relocator not idle stationary");
        if (a.relocate_station < 0 || a.relocate_station >= R ||
            net.station_loc(a.relocate_station) == e2.dest)
          infeasible(a, "bad relocation target");
        e2.remaining = net.travel_at(e2.dest, net.station_loc(a.relocate_station));
        e2.dest = net.station_loc(a.relocate_station);
      }
      e.remaining += net.travel_at(e.dest, k0);
      e.dest = k0;
      break;
    }
    case ActionType::Queue:
      if (s.event.type != EventType::Failure) infeasible(a, "not a failure event");
      break;
    case ActionType::Redeploy: {
      if (s.event.type != EventType::RepairEnd)
        infeasible(a, "not a repair-end event");
      const int from = s.event.location;
      const int who = actor_at(s, from);
      if (who < 0) infeasible(a, "no engineer at the repaired machine");
      if (a.target < 0 || a.target >= K + R) infeasible(a, "bad target");
      if (a.target < K && !in_queue(s, a.target))
        infeasible(a, "target machine not queued");
      out.engineers[who].remaining = net.travel_at(from, a.target);
      out.engineers[who].dest = a.target;
      break;
    }
    case ActionType::QueueDispatch: {
      if (s.event.type != EventType::ArriveStation)
        infeasible(a, "not a station arrival");
      const int who = actor_at(s, s.event.location);
      if (who < 0) infeasible(a, "no engineer at the station");
      if (a.target < 0 || a.target >= K || !in_queue(s, a.target))
        infeasible(a, "target machine not queued");
      out.engineers[who].remaining = net.travel_at(s.event.location, a.target);
      out.engineers[who].dest = a.target;
      break;
    }
    case ActionType::StayIdle: {
      if (s.event.type != EventType::ArriveStation)
        infeasible(a, "not a station arrival");
      bool queued = false;
      for (int k = 0; k < K && !queued; ++k) queued = in_queue(s, k);
      if (!queued) infeasible(a, "empty queue takes NoOp");
      break;
    }
    case ActionType::NoOp: {
      if (s.event.type == EventType::ArriveMachine) break;
      if (s.event.type == EventType::ArriveStation) {
        for (int k = 0; k < K; ++k)
          if (in_queue(s, k)) infeasible(a, "queue not empty");
        break;
      }
      infeasible(a, "noop only after arrivals");
    }
  }
}

SystemState apply_action(const SystemState& s, const Action& a,
                         const Network& net) {
  SystemState out;
  apply_action_into(s, a, net, out);
  return out;
}

}
