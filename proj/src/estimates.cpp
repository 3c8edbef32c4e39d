#include "dispatchsim/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "dispatchsim/errors.hpp"

namespace dispatchsim {

double repair_quantile(double mu, double percentile) {
  return -std::log1p(-percentile) / mu;
}

double response_time_estimate(const SystemState& s, const Network& net, int k,
                              int m, double percentile) {
  const auto& e = s.engineers[m];
  double rt = e.remaining + net.travel_at(e.dest, k);
  if (!net.is_station_loc(e.dest))  // busy: must finish the current job first
    rt += repair_quantile(net.mu, percentile);
  return rt;
}

std::vector<double> busy_probabilities(const Network& net, int M) {
  const double b =
      std::min(net.lambda * static_cast<double>(net.K()) /
                   (net.mu * static_cast<double>(M)),
               0.99);
  std::vector<double> P(static_cast<size_t>(M));
  double avail = 1.0 - b;
  for (int i = 0; i < M; ++i) {
    P[static_cast<size_t>(i)] = avail;
    avail *= b;
  }
  return P;
}

double expected_covered_demand_over(const std::vector<int>& over,
                                    const SystemState& s, const Network& net,
                                    const std::vector<double>& P,
                                    double percentile, EcdScratch& scratch) {
  if (over.empty()) throw EmptyWorkingSet("no working machine to cover");
  const int M = s.M();
  auto& rt = scratch.rt;
  rt.resize(static_cast<size_t>(M));
  double sum = 0.0;
  for (int k : over) {
    for (int m = 0; m < M; ++m)
      rt[static_cast<size_t>(m)] = response_time_estimate(s, net, k, m, percentile);
    // z_ki depends only on how many of the i closest estimates are within TL;
    // sorting the estimates alone preserves the (estimate, index) ranking.
    std::sort(rt.begin(), rt.end());
    for (int i = 0; i < M; ++i) {
      if (rt[static_cast<size_t>(i)] > net.time_limit) break;
      sum += P[static_cast<size_t>(i)];
    }
  }
  return sum / static_cast<double>(over.size());
}

double expected_covered_demand(const SystemState& s, const Network& net,
                               const std::vector<double>& P,
                               double percentile) {
  std::vector<int> working;
  for (int k = 0; k < s.K(); ++k)
    if (s.machines[k].kind == MachineKind::Working) working.push_back(k);
  EcdScratch scratch;
  return expected_covered_demand_over(working, s, net, P, percentile, scratch);
}

}  // namespace dispatchsim
