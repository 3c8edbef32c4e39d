#include "dispatchsim/tuning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "dispatchsim/errors.hpp"
#include "dispatchsim/parallel.hpp"

namespace dispatchsim {

FitnessFn make_adp_fitness(const Network& net, const Allocation& alloc,
                           const AdpParams& base, double sim_epsilon) {
  const int M = static_cast<int>(alloc.station_of_engineer.size());
  return [&net, &alloc, base, sim_epsilon, M](const CoefficientVector& alpha,
                                              double horizon,
                                              std::uint64_t seed) {
    AdpParams params = base;
    params.coeffs = alpha;
    AdpPolicy policy(net, params, M);
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.epsilon = sim_epsilon;
    cfg.master_seed = seed;
    const SimMetrics met = simulate(net, alloc, policy, cfg);
    return met.incidents > 0 ? met.cost_total / static_cast<double>(met.incidents)
                             : 0.0;
  };
}

CoefficientVector initial_alpha(BasisSet basis) {
  CoefficientVector cv;
  cv.alpha0 = 1.0;
  cv.alphas.assign(static_cast<size_t>(basis.dimension()), 1.0);
  switch (basis.selector) {
    case BasisSelector::Main4: cv.alphas[3] = -1.0; break;
    case BasisSelector::Main6: cv.alphas[4] = -1.0; break;
    case BasisSelector::Main4Plus2Steps: cv.alphas[11] = -1.0; [[fallthrough]];
    case BasisSelector::Main4Plus1Step: cv.alphas[7] = -1.0; cv.alphas[3] = -1.0;
  }
  return cv;
}

namespace {

using Flat = std::vector<double>;  // [0] = alpha0, rest = alphas

Flat flatten(const CoefficientVector& cv) {
  Flat f;
  f.reserve(cv.alphas.size() + 1);
  f.push_back(cv.alpha0);
  f.insert(f.end(), cv.alphas.begin(), cv.alphas.end());
  return f;
}

CoefficientVector unflatten(const Flat& f) {
  CoefficientVector cv;
  cv.alpha0 = f[0];
  cv.alphas.assign(f.begin() + 1, f.end());
  return cv;
}

double mutation_std(double amplitude, double value) {
  return amplitude * std::max(std::abs(value), 0.01);
}

class WallClock {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace

TuneResult genetic_tune(const FitnessFn& fitness, BasisSet basis,
                        const GaConfig& cfg, int threads,
                        const TuneTraceSink& sink) {
  if (cfg.population < 2 || !(cfg.amplitude > 0.0) ||
      !(cfg.elite_fraction > 0.0 && cfg.elite_fraction <= 1.0) ||
      !(cfg.fitness_horizon > 0.0))
    throw InvalidInput("bad genetic algorithm configuration");
  const int N = cfg.population;
  const int elite =
      static_cast<int>(std::ceil(cfg.elite_fraction * static_cast<double>(N)));
  const std::uint64_t audit_seed = derive_seed(cfg.master_seed, 1);
  RngStream rng(cfg.master_seed, 0);

  const Flat start = flatten(initial_alpha(basis));
  const size_t D = start.size();
  std::vector<Flat> pop(static_cast<size_t>(N), start);
  for (auto& member : pop)
    for (auto& x : member) x += rng.uniform(-1.0, 1.0);

  TuneResult result;
  result.best_fitness = kInf;
  std::vector<Flat> pool;
  std::vector<double> fit(static_cast<size_t>(3 * N));
  std::vector<int> order(static_cast<size_t>(3 * N));

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    WallClock clock;
    pool = pop;
    for (int c = 0; c < N; ++c) {  // pairwise-mean crossovers
      const int i = static_cast<int>(rng.below(static_cast<std::uint32_t>(N)));
      int j = static_cast<int>(rng.below(static_cast<std::uint32_t>(N - 1)));
      if (j >= i) ++j;
      Flat child(D);
      for (size_t d = 0; d < D; ++d)
        child[d] = 0.5 * (pop[static_cast<size_t>(i)][d] +
                          pop[static_cast<size_t>(j)][d]);
      pool.push_back(std::move(child));
    }
    for (int i = 0; i < N; ++i) {  // mutants of every current member
      Flat mutant = pop[static_cast<size_t>(i)];
      for (auto& x : mutant) x += rng.normal(0.0, mutation_std(cfg.amplitude, x));
      pool.push_back(std::move(mutant));
    }
    const std::uint64_t iter_seed =
        derive_seed(cfg.master_seed, 2 + static_cast<std::uint64_t>(iter));
    parallel_for(3 * N, threads, [&](int i) {
      fit[static_cast<size_t>(i)] = fitness(unflatten(pool[static_cast<size_t>(i)]),
                                            cfg.fitness_horizon, iter_seed);
    });
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (fit[static_cast<size_t>(a)] != fit[static_cast<size_t>(b)])
        return fit[static_cast<size_t>(a)] < fit[static_cast<size_t>(b)];
      return a < b;
    });
    // Audit the iteration winner under the fixed seed so the best-so-far
    // trace is comparable across iterations.
    const Flat& winner = pool[static_cast<size_t>(order[0])];
    const double audit_val =
        fitness(unflatten(winner), cfg.fitness_horizon, audit_seed);
    if (audit_val < result.best_fitness) {
      result.best_fitness = audit_val;
      result.best = unflatten(winner);
    }
    std::vector<Flat> next;
    next.reserve(static_cast<size_t>(N));
    for (int i = 0; i < elite && i < N; ++i)
      next.push_back(pool[static_cast<size_t>(order[i])]);
    const int rest = N - static_cast<int>(next.size());
    std::vector<int> remainder(order.begin() + elite, order.end());
    for (int j = 0; j < rest; ++j) {  // uniform draw without replacement
      const size_t pick =
          static_cast<size_t>(j) +
          static_cast<size_t>(rng.below(static_cast<std::uint32_t>(
              remainder.size() - static_cast<size_t>(j))));
      std::swap(remainder[static_cast<size_t>(j)], remainder[pick]);
      next.push_back(pool[static_cast<size_t>(remainder[static_cast<size_t>(j)])]);
    }
    pop = std::move(next);

    TuneIterRecord rec;
    rec.iteration = iter;
    rec.phase = "ga";
    rec.iter_best = fit[static_cast<size_t>(order[0])];
    rec.best_so_far = result.best_fitness;
    rec.evals_primary = 3 * N;
    rec.evals_audit = 1;
    rec.amplitude = cfg.amplitude;
    rec.wall_ms = clock.ms();
    result.trace.total_evaluations += rec.evals_primary + rec.evals_audit;
    if (sink) sink(rec);
    result.trace.iters.push_back(std::move(rec));
  }
  return result;
}

TuneResult tabu_tune(const FitnessFn& fitness, BasisSet basis,
                     const TsConfig& cfg, int threads,
                     const TuneTraceSink& sink) {
  const size_t D = flatten(initial_alpha(basis)).size();
  if (cfg.neighborhood < 1 || !(cfg.amplitude > 0.0) ||
      !(cfg.surrogate_fraction > 0.0 && cfg.surrogate_fraction <= 1.0) ||
      cfg.tabu_size < 0 || static_cast<size_t>(cfg.tabu_size) >= D ||
      cfg.tenure < 1 || !(cfg.surrogate_horizon > 0.0) ||
      !(cfg.primary_horizon > 0.0))
    throw InvalidInput("bad tabu search configuration");
  const int N = cfg.neighborhood;
  const int P = static_cast<int>(
      std::ceil(cfg.surrogate_fraction * static_cast<double>(N)));
  const std::uint64_t audit_seed = derive_seed(cfg.master_seed, 1);
  RngStream rng(cfg.master_seed, 0);

  Flat incumbent = flatten(initial_alpha(basis));
  double amplitude = cfg.amplitude;
  double surrogate_horizon = cfg.surrogate_horizon;
  std::vector<char> tabu(D, 0);
  std::vector<int> tabu_list;
  int countdown = 1;  // first refresh closes the initial, empty list

  TuneResult result;
  result.best_fitness = kInf;
  result.best = unflatten(incumbent);

  std::vector<Flat> cand(static_cast<size_t>(N));
  std::vector<double> sur(static_cast<size_t>(N));
  std::vector<int> order(static_cast<size_t>(N));
  std::vector<double> pri(static_cast<size_t>(P));

  const int total_iters = cfg.diversification_iters + cfg.intensification_iters;
  bool switched = false;
  for (int iter = 1; iter <= total_iters; ++iter) {
    const bool intensify = iter > cfg.diversification_iters;
    if (intensify && !switched) {
      switched = true;  // restart the walk from the best solution found
      if (result.best_fitness < kInf) incumbent = flatten(result.best);
    }
    WallClock clock;
    TuneIterRecord rec;
    rec.iteration = iter;
    rec.phase = intensify ? "intensification" : "diversification";
    rec.tabu = tabu_list;

    for (int i = 0; i < N; ++i) {
      cand[static_cast<size_t>(i)] = incumbent;
      auto& c = cand[static_cast<size_t>(i)];
      for (size_t d = 0; d < D; ++d)
        if (!tabu[d]) c[d] += rng.normal(0.0, mutation_std(amplitude, c[d]));
    }
    const std::uint64_t sur_seed =
        derive_seed(cfg.master_seed, 10000 + static_cast<std::uint64_t>(iter));
    const std::uint64_t pri_seed =
        derive_seed(cfg.master_seed, 20000 + static_cast<std::uint64_t>(iter));
    // Surrogate screen; a horizon too short to see failures ranks nothing,
    // so it doubles (sticky across iterations) until scores separate.
    for (int retry = 0;; ++retry) {
      parallel_for(N, threads, [&](int i) {
        sur[static_cast<size_t>(i)] =
            fitness(unflatten(cand[static_cast<size_t>(i)]), surrogate_horizon,
                    sur_seed);
      });
      rec.evals_surrogate += N;
      int zeros = 0;
      for (double v : sur)
        if (v == 0.0) ++zeros;
      if (zeros <= P || retry >= 20) break;
      surrogate_horizon *= 2.0;
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (sur[static_cast<size_t>(a)] != sur[static_cast<size_t>(b)])
        return sur[static_cast<size_t>(a)] < sur[static_cast<size_t>(b)];
      return a < b;
    });
    parallel_for(P, threads, [&](int i) {
      pri[static_cast<size_t>(i)] =
          fitness(unflatten(cand[static_cast<size_t>(order[static_cast<size_t>(i)])]),
                  cfg.primary_horizon, pri_seed);
    });
    rec.evals_primary += P;
    int best_i = 0;
    for (int i = 1; i < P; ++i)
      if (pri[static_cast<size_t>(i)] < pri[static_cast<size_t>(best_i)])
        best_i = i;
    const Flat& best_cand = cand[static_cast<size_t>(order[static_cast<size_t>(best_i)])];
    const double best_val = pri[static_cast<size_t>(best_i)];
    rec.iter_best = best_val;

    const double audit_val =
        fitness(unflatten(best_cand), cfg.primary_horizon, audit_seed);
    rec.evals_audit += 1;
    if (audit_val < result.best_fitness) {
      result.best_fitness = audit_val;
      result.best = unflatten(best_cand);
    }

    std::vector<double> delta(D, 0.0);
    for (size_t d = 0; d < D; ++d) delta[d] = std::abs(best_cand[d] - incumbent[d]);
    if (!intensify) {
      incumbent = best_cand;  // diversification walks regardless
    } else {
      const double incumbent_val =
          fitness(unflatten(incumbent), cfg.primary_horizon, pri_seed);
      rec.evals_primary += 1;
      if (best_val < incumbent_val)
        incumbent = best_cand;
      else
        amplitude *= 0.9;
    }

    if (--countdown == 0) {
      // Wholesale tabu replacement from the components just perturbed:
      // diversification pins what moved most, intensification what moved
      // least.
      std::vector<int> free_idx;
      for (size_t d = 0; d < D; ++d)
        if (!tabu[d]) free_idx.push_back(static_cast<int>(d));
      std::sort(free_idx.begin(), free_idx.end(), [&](int a, int b) {
        const double da = delta[static_cast<size_t>(a)];
        const double db = delta[static_cast<size_t>(b)];
        if (da != db) return intensify ? da < db : da > db;
        return a < b;
      });
      if (static_cast<int>(free_idx.size()) > cfg.tabu_size)
        free_idx.resize(static_cast<size_t>(cfg.tabu_size));
      std::fill(tabu.begin(), tabu.end(), char{0});
      tabu_list = free_idx;
      std::sort(tabu_list.begin(), tabu_list.end());
      for (int d : tabu_list) tabu[static_cast<size_t>(d)] = 1;
      countdown = cfg.tenure;
    }

    rec.best_so_far = result.best_fitness;
    rec.amplitude = amplitude;
    rec.wall_ms = clock.ms();
    result.trace.total_evaluations +=
        rec.evals_primary + rec.evals_surrogate + rec.evals_audit;
    if (sink) sink(rec);
    result.trace.iters.push_back(std::move(rec));
  }
  return result;
}

GridResult grid_search_heuristic(const Network& net, const Allocation& alloc,
                                 const HeuristicGrids& grids,
                                 const SimConfig& cfg, int threads) {
  if (grids.T1.empty() || grids.T2.empty() || grids.delta.empty())
    throw InvalidInput("empty heuristic grid");
  GridResult out;
  for (double t1 : grids.T1)
    for (double t2 : grids.T2)
      for (double dl : grids.delta) {
        GridPoint p;
        p.params.T1 = t1;
        p.params.T2 = t2;
        p.params.delta = dl;
        out.points.push_back(p);
      }
  parallel_for(static_cast<int>(out.points.size()), threads, [&](int i) {
    auto& p = out.points[static_cast<size_t>(i)];
    HeuristicPolicy policy(p.params);
    const SimMetrics met = simulate(net, alloc, policy, cfg);
    p.no_incidents = met.incidents == 0;
    p.fitness = met.incidents > 0 ? met.cost_per_incident : 0.0;
  });
  size_t best = 0;
  for (size_t i = 1; i < out.points.size(); ++i)
    if (out.points[i].fitness < out.points[best].fitness) best = i;
  out.best = out.points[best].params;
  out.best_fitness = out.points[best].fitness;
  return out;
}

}
