#include "dispatchsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dispatchsim/errors.hpp"
#include "dispatchsim/estimates.hpp"
#include "dispatchsim/rng.hpp"
#include "dispatchsim/state.hpp"

namespace dispatchsim {

std::vector<double> build_travel_matrix(const std::vector<Location>& machines,
                                        const std::vector<Location>& stations) {
  std::vector<Location> all;
  all.reserve(machines.size() + stations.size());
  all.insert(all.end(), machines.begin(), machines.end());
  all.insert(all.end(), stations.begin(), stations.end());
  const size_t L = all.size();
  std::vector<double> travel(L * L, 0.0);
  for (size_t a = 0; a < L; ++a)
    for (size_t b = a + 1; b < L; ++b)
      travel[a * L + b] = travel[b * L + a] = travel_time(all[a], all[b]);
  return travel;
}

Network generate_network(const NetworkGenParams& params, std::uint64_t seed) {
  const double side =
      params.TL * std::sqrt(static_cast<double>(params.K) / params.density);
  RngStream rng(seed);
  constexpr int kAttempts = 10000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Network net;
    net.lambda = params.lambda;
    net.mu = params.mu;
    net.time_limit = params.TL;
    net.stations.reserve(static_cast<size_t>(params.R));
    for (int r = 0; r < params.R; ++r)
      net.stations.push_back({rng.uniform(0.0, side), rng.uniform(0.0, side)});
    bool ok = true;
    net.machines.reserve(static_cast<size_t>(params.K));
    for (int k = 0; k < params.K && ok; ++k) {
      ok = false;
      for (int draw = 0; draw < kAttempts; ++draw) {
        Location c{rng.uniform(0.0, side), rng.uniform(0.0, side)};
        bool covered = false;
        for (const auto& st : net.stations)
          if (travel_time(c, st) <= params.TL) {
            covered = true;
            break;
          }
        if (covered) {
          net.machines.push_back(c);
          ok = true;
          break;
        }
      }
    }
    if (!ok) continue;  // a machine found no covered spot: resample everything
    for (int r = 0; r < params.R && ok; ++r) {
      bool covers = false;
      for (const auto& mc : net.machines)
        if (travel_time(net.stations[static_cast<size_t>(r)], mc) <=
            params.TL) {
          covers = true;
          break;
        }
      ok = covers;
    }
    if (!ok) continue;  // an idle station: resample everything
    net.travel = build_travel_matrix(net.machines, net.stations);
    return net;
  }
  throw GenerationFailed("no admissible network after 10000 attempts");
}

std::vector<std::vector<int>> coverage_sets(const Network& net) {
  std::vector<std::vector<int>> sets(static_cast<size_t>(net.K()));
  for (int k = 0; k < net.K(); ++k)
    for (int r = 0; r < net.R(); ++r)
      if (net.travel_at(k, net.station_loc(r)) <= net.time_limit)
        sets[static_cast<size_t>(k)].push_back(r);
  return sets;
}

std::uint64_t allocation_multiset_count(int R, int M) {
  constexpr std::uint64_t kSat = std::numeric_limits<std::int64_t>::max();
  unsigned __int128 result = 1;  // C(M+R-1, M), built factor by factor
  for (int i = 1; i <= M; ++i) {
    result = result * static_cast<unsigned>(R - 1 + i) / static_cast<unsigned>(i);
    if (result > kSat) return kSat;
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// ECD of the all-idle state for a candidate placement; `stations` holds the
// station index of each placed engineer (possibly fewer than M during the
// greedy phase — P still weighs ranks under the full crew size).
class AllocationScorer {
 public:
  AllocationScorer(const Network& net, int M)
      : net_(net), P_(busy_probabilities(net, M)) {
    s_.machines.assign(static_cast<size_t>(net.K()), MachineStatus::working());
    working_.resize(static_cast<size_t>(net.K()));
    std::iota(working_.begin(), working_.end(), 0);
  }

  double score(const std::vector<int>& stations) {
    s_.engineers.clear();
    for (int r : stations)
      s_.engineers.push_back({net_.station_loc(r), 0.0});
    return expected_covered_demand_over(working_, s_, net_, P_, 0.8, scratch_);
  }

 private:
  const Network& net_;
  std::vector<double> P_;
  SystemState s_;
  std::vector<int> working_;
  EcdScratch scratch_;
};

}  // namespace

Allocation initial_allocation(const Network& net, int M) {
  const int R = net.R();
  AllocationScorer scorer(net, M);
  std::vector<int> best;
  double best_ecd = -1.0;
  if (allocation_multiset_count(R, M) <= 1000000) {
    std::vector<int> c(static_cast<size_t>(M), 0);  // non-decreasing odometer
    for (;;) {
      const double ecd = scorer.score(c);
      if (ecd > best_ecd) {
        best_ecd = ecd;
        best = c;
      }
      int i = M - 1;
      while (i >= 0 && c[static_cast<size_t>(i)] == R - 1) --i;
      if (i < 0) break;
      const int v = c[static_cast<size_t>(i)] + 1;
      for (int j = i; j < M; ++j) c[static_cast<size_t>(j)] = v;
    }
  } else {
    // Greedy insertion...
    std::vector<int> c;
    for (int placed = 0; placed < M; ++placed) {
      int best_r = 0;
      double best_gain = -1.0;
      for (int r = 0; r < R; ++r) {
        c.push_back(r);
        const double ecd = scorer.score(c);
        c.pop_back();
        if (ecd > best_gain) {
          best_gain = ecd;
          best_r = r;
        }
      }
      c.push_back(best_r);
    }
    // ...then single-engineer moves until none improves.
    double cur = scorer.score(c);
    bool improved = true;
    while (improved) {
      improved = false;
      int move_e = -1, move_r = -1;
      double move_ecd = cur;
      for (int e = 0; e < M; ++e) {
        const int old = c[static_cast<size_t>(e)];
        for (int r = 0; r < R; ++r) {
          if (r == old) continue;
          c[static_cast<size_t>(e)] = r;
          const double ecd = scorer.score(c);
          if (ecd > move_ecd) {
            move_ecd = ecd;
            move_e = e;
            move_r = r;
          }
        }
        c[static_cast<size_t>(e)] = old;
      }
      if (move_e >= 0) {
        c[static_cast<size_t>(move_e)] = move_r;
        cur = move_ecd;
        improved = true;
      }
    }
    std::sort(c.begin(), c.end());
    best = c;
  }
  return Allocation{best};
}

namespace {

nlohmann::json loc_array(const std::vector<Location>& locs) {
  auto arr = nlohmann::json::array();
  for (const auto& l : locs) arr.push_back({l.x, l.y});
  return arr;
}

std::vector<Location> parse_locs(const nlohmann::json& arr) {
  std::vector<Location> out;
  for (const auto& e : arr) out.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return out;
}

void validate(const NetworkFile& nf) {
  const Network& n = nf.net;
  if (n.K() < 1 || n.R() < 1) throw InvalidInput("need K >= 1 and R >= 1");
  if (!(n.lambda > 0.0) || !(n.mu > 0.0) || !(n.time_limit > 0.0))
    throw InvalidInput("lambda, mu and time_limit must be positive");
  for (const auto& l : n.machines)
    if (!std::isfinite(l.x) || !std::isfinite(l.y))
      throw InvalidInput("non-finite coordinate");
  for (const auto& l : n.stations)
    if (!std::isfinite(l.x) || !std::isfinite(l.y))
      throw InvalidInput("non-finite coordinate");
  if (nf.alloc.station_of_engineer.empty())
    throw InvalidInput("empty allocation");
  for (int r : nf.alloc.station_of_engineer)
    if (r < 0 || r >= n.R()) throw InvalidInput("allocation station out of range");
  const auto sets = coverage_sets(n);
  std::vector<char> used(static_cast<size_t>(n.R()), 0);
  for (int k = 0; k < n.K(); ++k) {
    if (sets[static_cast<size_t>(k)].empty())
      throw InvalidInput("machine " + std::to_string(k) + " uncovered");
    for (int r : sets[static_cast<size_t>(k)]) used[static_cast<size_t>(r)] = 1;
  }
  for (int r = 0; r < n.R(); ++r)
    if (!used[static_cast<size_t>(r)])
      throw InvalidInput("station " + std::to_string(r) + " covers no machine");
}

}  // namespace

std::string network_to_json(const NetworkFile& nf) {
  nlohmann::json j;
  j["machines"] = loc_array(nf.net.machines);
  j["stations"] = loc_array(nf.net.stations);
  j["lambda"] = nf.net.lambda;
  j["mu"] = nf.net.mu;
  j["time_limit"] = nf.net.time_limit;
  j["allocation"] = nf.alloc.station_of_engineer;
  j["gen_params"] = {{"K", nf.gen_params.K},       {"R", nf.gen_params.R},
                     {"M", nf.gen_params.M},       {"TL", nf.gen_params.TL},
                     {"density", nf.gen_params.density},
                     {"lambda", nf.gen_params.lambda},
                     {"mu", nf.gen_params.mu}};
  j["seed"] = nf.seed;
  return j.dump(2) + "\n";
}

NetworkFile network_from_json(const std::string& text) {
  NetworkFile nf;
  try {
    const auto j = nlohmann::json::parse(text);
    nf.net.machines = parse_locs(j.at("machines"));
    nf.net.stations = parse_locs(j.at("stations"));
    nf.net.lambda = j.at("lambda").get<double>();
    nf.net.mu = j.at("mu").get<double>();
    nf.net.time_limit = j.at("time_limit").get<double>();
    nf.alloc.station_of_engineer = j.at("allocation").get<std::vector<int>>();
    if (j.contains("gen_params")) {
      const auto& g = j.at("gen_params");
      nf.gen_params.K = g.value("K", 0);
      nf.gen_params.R = g.value("R", 0);
      nf.gen_params.M = g.value("M", 0);
      nf.gen_params.TL = g.value("TL", 0.0);
      nf.gen_params.density = g.value("density", 0.0);
      nf.gen_params.lambda = g.value("lambda", 0.0);
      nf.gen_params.mu = g.value("mu", 0.0);
    }
    nf.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad network json: ") + e.what());
  }
  nf.net.travel = build_travel_matrix(nf.net.machines, nf.net.stations);
  validate(nf);
  return nf;
}

NetworkFile load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

void save_network(const NetworkFile& nf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << network_to_json(nf);
}

}
