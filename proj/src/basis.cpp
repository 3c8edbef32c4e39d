#include "dispatchsim/basis.hpp"

#include <algorithm>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

std::string basis_selector_name(BasisSelector sel) {
  switch (sel) {
    case BasisSelector::Main4: return "Main4";
    case BasisSelector::Main6: return "Main6";
    case BasisSelector::Main4Plus1Step: return "Main4Plus1Step";
    default: return "Main4Plus2Steps";
  }
}

BasisSelector basis_selector_from_name(const std::string& name) {
  if (name == "Main4") return BasisSelector::Main4;
  if (name == "Main6") return BasisSelector::Main6;
  if (name == "Main4Plus1Step") return BasisSelector::Main4Plus1Step;
  if (name == "Main4Plus2Steps") return BasisSelector::Main4Plus2Steps;
  throw InvalidInput("unknown basis set: " + name);
}

namespace {

// Moves the state to the next pending engineer arrival (no stochastic events
// in between); false when nobody is en route. An engineer already at a still
// waiting machine counts as arriving immediately.
bool advance_to_next_arrival(SystemState& fs) {
  int who = -1;
  double d = 0.0;
  for (int m = 0; m < fs.M(); ++m) {
    const auto& e = fs.engineers[m];
    double pending;
    if (e.remaining > 0.0)
      pending = e.remaining;
    else if (e.dest < fs.K() && fs.machines[e.dest].kind == MachineKind::Waiting)
      pending = 0.0;
    else
      continue;
    if (who < 0 || pending < d) {
      who = m;
      d = pending;
    }
  }
  if (who < 0) return false;
  fs.time += d;
  for (auto& mk : fs.machines)
    if (mk.kind == MachineKind::Waiting) mk.waiting += d;
  for (int m = 0; m < fs.M(); ++m) {
    auto& e = fs.engineers[m];
    if (e.remaining > 0.0) e.remaining = std::max(0.0, e.remaining - d);
  }
  auto& e = fs.engineers[who];
  e.remaining = 0.0;
  if (e.dest < fs.K()) {
    fs.machines[e.dest] = MachineStatus::in_repair();
    fs.event = {EventType::ArriveMachine, e.dest};
  } else {
    fs.event = {EventType::ArriveStation, e.dest};
  }
  return true;
}

}  // namespace

SystemState future_state(const SystemState& s, int steps) {
  SystemState fs = s;
  for (int i = 0; i < steps; ++i)
    if (!advance_to_next_arrival(fs)) break;
  return fs;
}

BasisEvaluator::BasisEvaluator(const Network& net, BasisSet basis,
                               double percentile, int M)
    : net_(&net),
      basis_(basis),
      percentile_(percentile),
      P_(busy_probabilities(net, M)) {
  assigned_.resize(static_cast<size_t>(net.K()));
  working_.reserve(static_cast<size_t>(net.K()));
}

bool BasisEvaluator::advance_one(SystemState& fs) {
  return advance_to_next_arrival(fs);
}

void BasisEvaluator::main_block(const SystemState& s, double* out, int count) {
  const int K = s.K(), M = s.M();
  const double TL = net_->time_limit;
  std::fill(assigned_.begin(), assigned_.end(), char{0});
  for (int m = 0; m < M; ++m)
    if (s.engineers[m].dest < K)
      assigned_[static_cast<size_t>(s.engineers[m].dest)] = 1;
  const bool failure = s.event.type == EventType::Failure;
  const int el = s.event.location;
  int phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;
  working_.clear();
  for (int k = 0; k < K; ++k) {
    const double kappa = kappa_of(s.machines[k]);
    if (assigned_[static_cast<size_t>(k)]) {
      if (kappa > 0.0 && kappa < TL) ++phi1;
    } else {
      if (kappa > 0.0 || (failure && el == k)) ++phi2;
      if (kappa >= TL) ++phi3;
    }
    if (kappa == 0.0) {
      if (!(failure && el == k)) working_.push_back(k);
      if (count == 6 && k != el) {
        bool covered = false;
        for (int m = 0; m < M && !covered; ++m)
          covered = response_time_estimate(s, *net_, k, m, percentile_) <= TL;
        if (!covered) ++phi4;
      }
    }
  }
  double phi5 = 1.0, phi6 = 0.0;
  if (!working_.empty()) {
    phi5 = expected_covered_demand_over(working_, s, *net_, P_, percentile_,
                                        ecd_);
    if (count == 6) {
      double sum = 0.0;
      for (int k : working_) {
        double best = response_time_estimate(s, *net_, k, 0, percentile_);
        for (int m = 1; m < M; ++m)
          best = std::min(best,
                          response_time_estimate(s, *net_, k, m, percentile_));
        sum += best;
      }
      phi6 = sum / static_cast<double>(working_.size());
    }
  }
  out[0] = phi1;
  out[1] = phi2;
  out[2] = phi3;
  if (count == 6) {
    out[3] = phi4;
    out[4] = phi5;
    out[5] = phi6;
  } else {
    out[3] = phi5;
  }
}

void BasisEvaluator::eval_into(const SystemState& s, std::vector<double>& out) {
  const int dim = basis_.dimension();
  out.resize(static_cast<size_t>(dim));
  if (basis_.selector == BasisSelector::Main6) {
    main_block(s, out.data(), 6);
    return;
  }
  main_block(s, out.data(), 4);
  if (basis_.selector == BasisSelector::Main4) return;
  future_ = s;
  advance_one(future_);
  main_block(future_, out.data() + 4, 4);
  if (basis_.selector == BasisSelector::Main4Plus1Step) return;
  advance_one(future_);
  main_block(future_, out.data() + 8, 4);
}

std::vector<double> basis_vector(const SystemState& s, const Network& net,
                                 BasisSet basis, double percentile) {
  BasisEvaluator eval(net, basis, percentile, s.M());
  std::vector<double> out;
  eval.eval_into(s, out);
  return out;
}

}
