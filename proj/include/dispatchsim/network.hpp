#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dispatchsim/geometry.hpp"

namespace dispatchsim {

// Fixed service-region geometry. Locations share one index space:
// machines occupy [0, K) and stations [K, K+R).
struct Network {
  std::vector<Location> machines;
  std::vector<Location> stations;
  double lambda = 0.0;      // failure rate per working machine
  double mu = 0.0;          // repair completion rate
  double time_limit = 0.0;  // TL, the late-arrival threshold
  std::vector<double> travel;  // (K+R)^2 row-major travel times

  int K() const { return static_cast<int>(machines.size()); }
  int R() const { return static_cast<int>(stations.size()); }
  int L() const { return K() + R(); }
  int station_loc(int r) const { return K() + r; }
  bool is_station_loc(int l) const { return l >= K(); }

  Location loc(int l) const {
    return l < K() ? machines[l] : stations[l - K()];
  }
  double travel_at(int a, int b) const { return travel[a * L() + b]; }
};

struct NetworkGenParams {
  int K = 0;
  int R = 0;
  int M = 0;
  double TL = 0.0;
  double density = 0.0;  // d: machines per TL-by-TL patch, controls sparsity
  double lambda = 0.0;
  double mu = 0.0;
};

struct Allocation {
  std::vector<int> station_of_engineer;  // size M, entries in [0, R)
};

// Recomputes the travel matrix from stored coordinates.
std::vector<double> build_travel_matrix(const std::vector<Location>& machines,
                                        const std::vector<Location>& stations);

// Rejection-samples a network on a square of side TL*sqrt(K/density):
// stations uniform, each machine resampled until within TL of some station,
// the whole network resampled until every station covers at least one
// machine. Deterministic in seed. Throws GenerationFailed after 10,000
// whole-network attempts.
Network generate_network(const NetworkGenParams& params, std::uint64_t seed);

// station r is in set k iff travel(machine k, station r) <= TL.
std::vector<std::vector<int>> coverage_sets(const Network& net);

// Places M engineers on stations maximizing the expected covered demand of
// the all-idle, all-working state. Exhaustive over station multisets when
// C(M+R-1, M) <= 1e6, otherwise greedy insertion plus single-engineer local
// search.
Allocation initial_allocation(const Network& net, int M);

// Number of station multisets of size M; saturates at 2^63-1.
std::uint64_t allocation_multiset_count(int R, int M);

// On-disk form: geometry plus the allocation and provenance.
struct NetworkFile {
  Network net;
  Allocation alloc;
  NetworkGenParams gen_params;
  std::uint64_t seed = 0;
};

std::string network_to_json(const NetworkFile& nf);
NetworkFile network_from_json(const std::string& text);
NetworkFile load_network(const std::string& path);
void save_network(const NetworkFile& nf, const std::string& path);

}
