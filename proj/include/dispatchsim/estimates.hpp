#pragma once

#include <vector>

#include "dispatchsim/network.hpp"
#include "dispatchsim/state.hpp"

namespace dispatchsim {

// Repair-time quantile used to pad estimates for busy engineers:
// -ln(1 - percentile) / mu.
double repair_quantile(double mu, double percentile);

// Estimated time until engineer m could be serving machine k: remaining
// travel plus travel from the current destination to k, plus the repair-time
// quantile when m is busy (its destination is a machine).
double response_time_estimate(const SystemState& s, const Network& net, int k,
                              int m, double percentile);

// Order-statistics availability: P_i = (1-b) b^{i-1} with busy fraction
// b = min(lambda K / (mu M), 0.99), for i = 1..M.
std::vector<double> busy_probabilities(const Network& net, int M);

// Expected covered demand over the given machine set: mean over k of
// sum_i P_i * [i-th closest engineer reaches k within TL]. Engineers are
// ranked by response_time_estimate, ties by index.
// Throws EmptyWorkingSet when `over` is empty.
struct EcdScratch {
  std::vector<double> rt;
};
double expected_covered_demand_over(const std::vector<int>& over,
                                    const SystemState& s, const Network& net,
                                    const std::vector<double>& P,
                                    double percentile, EcdScratch& scratch);

// Same, over the currently working machines.
double expected_covered_demand(const SystemState& s, const Network& net,
                               const std::vector<double>& P, double percentile);

}  // namespace dispatchsim
