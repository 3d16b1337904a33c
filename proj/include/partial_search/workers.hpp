#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace partial_search {

/// Non-positive requests mean "use the available hardware parallelism".
inline unsigned resolve_workers(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs body(worker_index) for worker_index in [0, workers). Worker 0 runs on
/// the calling thread. The first exception (by worker index) is rethrown
/// after all workers finish.
template <typename Body>
void run_workers(unsigned workers, Body&& body) {
  if (workers <= 1) {
    body(0U);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  auto guarded = [&body, &errors](unsigned w) {
    try {
      body(w);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) threads.emplace_back(guarded, w);
    guarded(0U);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace partial_search
