#include "dispatchsim/state.hpp"

#include <json.hpp>

namespace dispatchsim {

bool operator==(const SystemState& a, const SystemState& b) {
  if (a.time != b.time || !(a.event == b.event)) return false;
  if (a.machines.size() != b.machines.size() ||
      a.engineers.size() != b.engineers.size())
    return false;
  for (size_t k = 0; k < a.machines.size(); ++k) {
    const auto &ma = a.machines[k], &mb = b.machines[k];
    if (ma.kind != mb.kind) return false;
    if (ma.kind == MachineKind::Waiting && ma.waiting != mb.waiting) return false;
  }
  for (size_t m = 0; m < a.engineers.size(); ++m)
    if (!(a.engineers[m] == b.engineers[m])) return false;
  return true;
}

bool machine_assigned(const SystemState& s, int k) {
  for (const auto& e : s.engineers)
    if (e.dest == k) return true;
  return false;
}

DerivedSets derived_sets(const SystemState& s, const Network& net) {
  DerivedSets d;
  const int K = s.K();
  for (int m = 0; m < s.M(); ++m) {
    if (net.is_station_loc(s.engineers[m].dest)) {
      d.idle.push_back(m);
      if (s.engineers[m].remaining == 0.0) d.idle_stationary.push_back(m);
    }
  }
  for (int k = 0; k < K; ++k) {
    switch (s.machines[k].kind) {
      case MachineKind::Working:
        d.working.push_back(k);
        break;
      case MachineKind::InRepair:
        d.in_repair.push_back(k);
        break;
      case MachineKind::Waiting:
        if (!machine_assigned(s, k)) d.queue.push_back(k);
        break;
    }
  }
  return d;
}

std::string state_to_json(const SystemState& s) {
  nlohmann::json j;
  j["t"] = s.time;
  j["event"] = {{"type", static_cast<int>(s.event.type)},
                {"location", s.event.location}};
  nlohmann::json kap = nlohmann::json::array();
  std::string status;
  for (const auto& m : s.machines) {
    kap.push_back(kappa_of(m));
    status += m.kind == MachineKind::Working  ? 'w'
              : m.kind == MachineKind::InRepair ? 'r'
                                                : 'q';
  }
  j["kappa"] = std::move(kap);
  j["status"] = status;
  nlohmann::json eng = nlohmann::json::array();
  for (const auto& e : s.engineers) eng.push_back({e.dest, e.remaining});
  j["engineers"] = std::move(eng);
  return j.dump();
}

}
