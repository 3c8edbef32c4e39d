#include "dispatchsim/adp.hpp"

#include <cmath>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

AdpPolicy::AdpPolicy(const Network& net, const AdpParams& params, int M)
    : params_(params),
      log_gamma_(std::log(params.gamma)),
      evaluator_(net, params.basis, params.percentile, M) {
  if (static_cast<int>(params.coeffs.alphas.size()) !=
      params.basis.dimension())
    throw InvalidInput("coefficient count does not match the basis dimension");
  if (!(params.gamma > 0.0 && params.gamma < 1.0) || params.samples < 1)
    throw InvalidInput("need 0 < gamma < 1 and samples >= 1");
}

double AdpPolicy::action_value(const SystemState& s, const Action& a,
                               const Network& net, std::uint64_t draw_base,
                               int action_index) {
  apply_action_into(s, a, net, post_);
  try {
    transition_law_into(post_, net, law_);
  } catch (const AbsorbingState&) {
    return kInf;  // the system would never move again under this action
  }
  const auto& alpha = params_.coeffs.alphas;
  double sum = 0.0;
  for (int g = 0; g < params_.samples; ++g) {
    const std::uint64_t key =
        params_.crn ? static_cast<std::uint64_t>(g)
                    : static_cast<std::uint64_t>(action_index) *
                              static_cast<std::uint64_t>(params_.samples) +
                          static_cast<std::uint64_t>(g);
    RngStream stream(draw_base, key);
    next_ = post_;
    const double elapsed = advance_in_place(next_, law_, stream);
    const CostBreakdown cost =
        transition_cost(s, next_, net.time_limit, params_.epsilon);
    evaluator_.eval_into(next_, phi_);
    double v = params_.coeffs.alpha0;
    for (size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * phi_[i];
    sum += cost.total + std::exp(log_gamma_ * elapsed) * v;
  }
  return sum / static_cast<double>(params_.samples);
}

Action AdpPolicy::decide(const SystemState& s, const Network& net,
                         RngStream& rng) {
  enumerate_actions_into(s, net, actions_);
  if (actions_.size() == 1) return actions_[0];
  const std::uint64_t draw_base = rng.next_u64();
  int best = 0;
  double best_value = kInf;
  for (size_t i = 0; i < actions_.size(); ++i) {
    const double v =
        action_value(s, actions_[i], net, draw_base, static_cast<int>(i));
    if (v < best_value) {
      best_value = v;
      best = static_cast<int>(i);
    }
  }
  return actions_[static_cast<size_t>(best)];
}

}
