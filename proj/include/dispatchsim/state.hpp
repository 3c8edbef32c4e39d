#pragma once

#include <string>
#include <vector>

#include "dispatchsim/network.hpp"

namespace dispatchsim {

enum class EventType : int {
  Failure = 1,
  RepairEnd = 2,
  ArriveStation = 3,
  ArriveMachine = 4,
};

struct Event {
  EventType type = EventType::Failure;
  int location = 0;  // machine index, or K+r for station r
};

inline bool operator==(Event a, Event b) {
  return a.type == b.type && a.location == b.location;
}

enum class MachineKind : int { Working = 0, InRepair = 1, Waiting = 2 };

// Waiting(0) is reserved for a machine at the instant of its failure event;
// the tag keeps it distinct from Working, which a bare waiting-time encoding
// cannot.
struct MachineStatus {
  MachineKind kind = MachineKind::Working;
  double waiting = 0.0;  // meaningful only when kind == Waiting

  static MachineStatus working() { return {MachineKind::Working, 0.0}; }
  static MachineStatus in_repair() { return {MachineKind::InRepair, 0.0}; }
  static MachineStatus waiting_for(double t) { return {MachineKind::Waiting, t}; }
};

// Scalar encoding used by the basis functions: 0 working, -1 in repair,
// waiting time otherwise.
inline double kappa_of(MachineStatus st) {
  switch (st.kind) {
    case MachineKind::Working: return 0.0;
    case MachineKind::InRepair: return -1.0;
    default: return st.waiting;
  }
}

struct EngineerStatus {
  int dest = 0;            // location index the engineer heads to or sits at
  double remaining = 0.0;  // travel time left; 0 means resident at dest
};

inline bool operator==(EngineerStatus a, EngineerStatus b) {
  return a.dest == b.dest && a.remaining == b.remaining;
}

// Embedded-process state at an event epoch.
struct SystemState {
  double time = 0.0;
  Event event;
  std::vector<MachineStatus> machines;
  std::vector<EngineerStatus> engineers;

  int K() const { return static_cast<int>(machines.size()); }
  int M() const { return static_cast<int>(engineers.size()); }
};

bool operator==(const SystemState& a, const SystemState& b);

struct DerivedSets {
  std::vector<int> idle;             // F: engineers whose dest is a station
  std::vector<int> idle_stationary;  // F0: idle with remaining 0
  std::vector<int> queue;            // Q: waiting machines with nobody en route
  std::vector<int> working;          // W
  std::vector<int> in_repair;        // H
};

DerivedSets derived_sets(const SystemState& s, const Network& net);

// True iff some engineer's destination is machine k.
bool machine_assigned(const SystemState& s, int k);

// Debug/trace serialization: {"t":..., "event":{...}, "kappa":[...],
// "status":"w|r|q per machine", "engineers":[[dest,remaining],...]}.
std::string state_to_json(const SystemState& s);

}
