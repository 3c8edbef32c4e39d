#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dispatchsim/adp.hpp"
#include "dispatchsim/policies.hpp"
#include "dispatchsim/simulator.hpp"

namespace dispatchsim {

// Cost per incident of the policy defined by `alpha`, simulated over
// `horizon` with `seed`. Tuners only see this signature, so tests can swap
// in synthetic objectives.
using FitnessFn = std::function<double(
    const CoefficientVector& alpha, double horizon, std::uint64_t seed)>;

// The real objective: run the ADP policy built from `base` (coefficients
// replaced by alpha) and return SimMetrics.cost_per_incident (0 when no
// incident occurred).
FitnessFn make_adp_fitness(const Network& net, const Allocation& alloc,
                           const AdpParams& base, double sim_epsilon);

struct GaConfig {
  int population = 50;        // N
  double amplitude = 0.7;     // A, mutation scale
  double elite_fraction = 0.8;  // q
  int iterations = 100;
  double fitness_horizon = 0.0;  // caller sets; default 500/(lambda K)
  std::uint64_t master_seed = 0;
};

struct TsConfig {
  int neighborhood = 400;       // N, candidates per iteration
  double amplitude = 0.7;       // A, move scale
  double surrogate_fraction = 0.3;  // f
  int tabu_size = 3;            // TLS
  int tenure = 2;               // TLT
  int diversification_iters = 50;
  int intensification_iters = 50;
  double surrogate_horizon = 0.0;  // default 30/(lambda K)
  double primary_horizon = 0.0;    // default 500/(lambda K)
  std::uint64_t master_seed = 0;
};

struct TuneIterRecord {
  int iteration = 0;  // 1-based
  std::string phase;  // "ga", "diversification" or "intensification"
  double iter_best = 0.0;     // best fitness under this iteration's seed
  double best_so_far = 0.0;   // best audit-seed fitness seen so far
  long long evals_primary = 0;
  long long evals_surrogate = 0;
  long long evals_audit = 0;
  double amplitude = 0.0;
  std::vector<int> tabu;  // empty for GA
  double wall_ms = 0.0;
};

using TuneTraceSink = std::function<void(const TuneIterRecord&)>;

struct TuneTrace {
  std::vector<TuneIterRecord> iters;
  long long total_evaluations = 0;
};

struct TuneResult {
  CoefficientVector best;
  double best_fitness = 0.0;  // under the audit seed
  TuneTrace trace;
};

// Starting point: every coefficient 1 except the expected-covered-demand
// columns, which start at -1 (alpha0 = 1).
CoefficientVector initial_alpha(BasisSet basis);

// Population search: each iteration evaluates the current members, their
// pairwise-mean crossovers and their mutants (3N total) under one shared
// seed, then keeps the ceil(qN) best plus random others. Best-so-far is
// re-scored under a fixed audit seed, making its trace non-increasing.
TuneResult genetic_tune(const FitnessFn& fitness, BasisSet basis,
                        const GaConfig& cfg, int threads = 1,
                        const TuneTraceSink& sink = nullptr);

// Two-phase local search: candidates perturb the non-tabu coefficients, get
// ranked by a short surrogate simulation (horizon doubled while too many
// score zero), and the best few earn full-length evaluations.
// Diversification always moves and tabus the most-changed indices;
// intensification moves only on improvement, shrinks the amplitude by 10%
// on failure, and tabus the least-changed indices.
TuneResult tabu_tune(const FitnessFn& fitness, BasisSet basis,
                     const TsConfig& cfg, int threads = 1,
                     const TuneTraceSink& sink = nullptr);

struct HeuristicGrids {
  std::vector<double> T1;
  std::vector<double> T2;
  std::vector<double> delta;
};

struct GridPoint {
  HeuristicParams params;
  double fitness = 0.0;
  bool no_incidents = false;
};

struct GridResult {
  HeuristicParams best;
  double best_fitness = 0.0;
  std::vector<GridPoint> points;
};

// Evaluates every (T1, T2, delta) combination by simulation with the shared
// cfg seed; returns the cost-per-incident minimizer, ties to the earlier
// grid point.
GridResult grid_search_heuristic(const Network& net, const Allocation& alloc,
                                 const HeuristicGrids& grids,
                                 const SimConfig& cfg, int threads = 1);

}  // namespace dispatchsim
