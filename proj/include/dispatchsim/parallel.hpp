#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace dispatchsim {

// Runs fn(0..n-1), spreading indices over up to `threads` workers. Each index
// must write only its own output slot; results are then independent of the
// schedule, so any thread count produces identical data.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads > n) threads = n;
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace dispatchsim
