#pragma once

#include <memory>
#include <vector>

#include "dispatchsim/basis.hpp"
#include "dispatchsim/dynamics.hpp"
#include "dispatchsim/policy.hpp"

namespace dispatchsim {

struct AdpParams {
  CoefficientVector coeffs;
  BasisSet basis;
  double gamma = 0.99;      // discount per time unit
  int samples = 30;         // G: Monte Carlo transitions per action
  bool crn = true;          // reuse the same draws across actions
  double percentile = 0.8;  // repair-time quantile inside the features
  double epsilon = 0.01;    // overtime weight in the transition cost
};

// One-step lookahead on the approximate value function: picks the action
// minimizing the sampled mean of immediate cost plus discounted
// alpha0 + alpha . features(next state). Ties go to the earlier action in
// the model's enumeration order.
class AdpPolicy final : public Policy {
 public:
  AdpPolicy(const Network& net, const AdpParams& params, int M);
  Action decide(const SystemState& s, const Network& net,
                RngStream& rng) override;
  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<AdpPolicy>(*this);
  }
  const char* name() const override { return "adp"; }
  const AdpParams& params() const { return params_; }

  // Sampled value of one action (exposed for tests).
  double action_value(const SystemState& s, const Action& a,
                      const Network& net, std::uint64_t draw_base,
                      int action_index);

 private:
  AdpParams params_;
  double log_gamma_;
  BasisEvaluator evaluator_;
  std::vector<Action> actions_;
  SystemState post_, next_;
  TransitionLaw law_;
  std::vector<double> phi_;
};

}  // namespace dispatchsim
