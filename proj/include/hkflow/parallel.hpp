#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hkflow {

/// Worker cap: min(hardware_concurrency, HKFLOW_THREADS).
inline int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("HKFLOW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < hw) hw = cap;
  }
  return hw;
}

/// Runs fn(i) for i in [0, n) on up to max_threads() workers. Each job owns
/// its output slot; chunking is static so results are deterministic.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int nt = std::min(max_threads(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  for (int w = 0; w < nt; ++w)
    workers.emplace_back([&, w]() {
      for (int i = w; i < n; i += nt) fn(i);
    });
  for (auto& t : workers) t.join();
}

}  // namespace hkflow
