#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

#include "partial_search/subspace.hpp"
#include "partial_search/workers.hpp"

namespace partial_search {

/// Integer grid for G_n G_m^{k2} G_n^{k1}: k2 in [0, max_k2] and
/// 1 + k1 + k2 <= max_total.
struct GrkGrid {
  std::uint64_t max_k2;
  std::uint64_t max_total;
};

struct GrkScanResult {
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  State3 state{};

  std::uint64_t total_queries() const { return 1 + k1 + k2; }

  /// Strict ordering used by every reduction: lower value, then fewer queries, then smaller k2.
  bool better_than(const GrkScanResult& other) const {
    return std::tuple{value, k1 + k2, k2} < std::tuple{other.value, other.k1 + other.k2, other.k2};
  }
};

/// Minimizes objective(state, k1, k2) over the grid. k2 values are dealt
/// round-robin to workers and the per-worker minima are merged with
/// GrkScanResult::better_than, so the outcome does not depend on `workers`.
template <typename Objective>
GrkScanResult minimize_over_grk(const GrkEvaluator& eval, GrkGrid grid, Objective&& objective,
                                unsigned workers = 1) {
  if (grid.max_total == 0) return {};
  grid.max_k2 = std::min(grid.max_k2, grid.max_total - 1);
  const std::uint64_t k1_cap = std::min<std::uint64_t>(eval.max_k1(), grid.max_total - 1);
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(grid.max_k2 + 1)));

  std::vector<GrkScanResult> partial(workers);
  run_workers(workers, [&](unsigned w) {
    GrkScanResult best;
    for (std::uint64_t k2 = w; k2 <= grid.max_k2; k2 += workers) {
      const BlockRotation rot = eval.rotation(k2);
      const std::uint64_t k1_max = std::min(k1_cap, grid.max_total - 1 - k2);
      for (std::uint64_t k1 = 0; k1 <= k1_max; ++k1) {
        GrkScanResult candidate;
        candidate.state = eval.state(k1, rot);
        candidate.value = objective(candidate.state, k1, k2);
        candidate.k1 = k1;
        candidate.k2 = k2;
        if (candidate.better_than(best)) best = candidate;
      }
    }
    partial[w] = best;
  });

  GrkScanResult best;
  for (const GrkScanResult& r : partial)
    if (r.better_than(best)) best = r;
  return best;
}

}  // namespace partial_search
