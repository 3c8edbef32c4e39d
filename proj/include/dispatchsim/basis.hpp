#pragma once

#include <string>
#include <vector>

#include "dispatchsim/estimates.hpp"
#include "dispatchsim/network.hpp"
#include "dispatchsim/state.hpp"

namespace dispatchsim {

// Which columns the value-function approximation uses. "Main" features are
// computed on the current state; the 8/12-column variants append the same
// four features evaluated after the next one or two deterministic engineer
// arrivals.
enum class BasisSelector { Main4, Main6, Main4Plus1Step, Main4Plus2Steps };

struct BasisSet {
  BasisSelector selector = BasisSelector::Main4Plus2Steps;
  int dimension() const {
    switch (selector) {
      case BasisSelector::Main4: return 4;
      case BasisSelector::Main6: return 6;
      case BasisSelector::Main4Plus1Step: return 8;
      default: return 12;
    }
  }
};

std::string basis_selector_name(BasisSelector sel);
BasisSelector basis_selector_from_name(const std::string& name);

struct CoefficientVector {
  double alpha0 = 0.0;
  std::vector<double> alphas;  // one per basis column
};

// State after the next `steps` (1 or 2) pending engineer arrivals, assuming
// no failures or repair completions happen meanwhile. With fewer pending
// arrivals than steps, stops at the last reachable state.
SystemState future_state(const SystemState& s, int steps);

// Evaluates the feature columns; holds every scratch buffer so repeated
// evaluation allocates nothing.
class BasisEvaluator {
 public:
  BasisEvaluator(const Network& net, BasisSet basis, double percentile, int M);
  void eval_into(const SystemState& s, std::vector<double>& out);
  int dimension() const { return basis_.dimension(); }

 private:
  void main_block(const SystemState& s, double* out, int count);
  // Advances `fs` to the next pending arrival; false when none is left.
  bool advance_one(SystemState& fs);

  const Network* net_;
  BasisSet basis_;
  double percentile_;
  std::vector<double> P_;
  std::vector<char> assigned_;
  std::vector<int> working_;
  EcdScratch ecd_;
  SystemState future_;
};

std::vector<double> basis_vector(const SystemState& s, const Network& net,
                                 BasisSet basis, double percentile);

}  // namespace dispatchsim
