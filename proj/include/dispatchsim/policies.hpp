#pragma once

#include <memory>
#include <vector>

#include "dispatchsim/policy.hpp"

namespace dispatchsim {

// Dispatch the nearest idle engineer, serve the queue first-in-first-out,
// return to the nearest station, never relocate.
Action closest_first(const SystemState& s, const Network& net);

class ClosestFirstPolicy final : public Policy {
 public:
  Action decide(const SystemState& s, const Network& net, RngStream&) override {
    return closest_first(s, net);
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<ClosestFirstPolicy>(*this);
  }
  const char* name() const override { return "closest_first"; }
};

struct HeuristicParams {
  double T1 = 10.0;        // redeploy search radius after a repair
  double T2 = 10.0;        // relocation pair radius
  double delta = 0.01;     // minimum coverage improvement to relocate
  double percentile = 0.8; // repair-time quantile for busy engineers
};

// Percentile dispatching with coverage-driven relocation: dispatch the
// engineer with the best quantile-padded estimate (queue if that engineer is
// busy), then consider one station-to-station relocation that improves
// expected covered demand by more than delta.
Action heuristic_policy(const SystemState& s, const Network& net,
                        const HeuristicParams& params);

class HeuristicPolicy final : public Policy {
 public:
  explicit HeuristicPolicy(const HeuristicParams& params) : params_(params) {}
  Action decide(const SystemState& s, const Network& net, RngStream&) override {
    return heuristic_policy(s, net, params_);
  }
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<HeuristicPolicy>(*this);
  }
  const char* name() const override { return "heuristic"; }
  const HeuristicParams& params() const { return params_; }

 private:
  HeuristicParams params_;
};

}  // namespace dispatchsim
