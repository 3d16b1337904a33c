#pragma once

// Exhaustive search over all 2^k orderings of k global/local Grover queries.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "partial_search/errors.hpp"
#include "partial_search/search_space.hpp"
#include "partial_search/subspace.hpp"
#include "partial_search/workers.hpp"

namespace partial_search {

inline constexpr int kMaxEnumerationLength = 30;
inline constexpr double kTieTolerance = 1e-9;
/// Co-optimal sequences beyond this many are counted but not listed.
inline constexpr std::size_t kMaxListedTies = 1024;

struct EnumerationResult {
  int k_tot = 0;
  double pr_max = 0.0;
  /// Canonical order; front() is the reported representative.
  std::vector<OperatorSequence> optimal_sequences;
  /// Number of co-optimal sequences of the reported kind (may exceed the list size).
  std::uint64_t tie_count = 0;
  double expected_iterations = 0.0;

  const OperatorSequence& best() const { return optimal_sequences.front(); }
};

namespace detail {

/// Ordering key for co-optimal sequences: sequences ending in a local run sort
/// last, then fewer runs, then the application-order bit string (Global = 0).
struct TieKey {
  bool local_final;
  int runs;
  std::uint32_t lex;
  std::uint32_t bits;

  friend bool operator<(const TieKey& x, const TieKey& y) {
    return std::tie(x.local_final, x.runs, x.lex) < std::tie(y.local_final, y.runs, y.lex);
  }
};

inline TieKey make_tie_key(std::uint32_t bits, int length) {
  const std::uint32_t mask = length == 32 ? ~0U : ((1U << length) - 1U);
  const std::uint32_t changes = (bits ^ (bits >> 1)) & (mask >> 1);
  std::uint32_t lex = 0;
  for (int i = 0; i < length; ++i) lex |= ((bits >> i) & 1U) << (length - 1 - i);
  return {((bits >> (length - 1)) & 1U) != 0, 1 + std::popcount(changes), lex, bits};
}

/// Depth-first walk over the binary tree of operator choices; each interior
/// state is computed once and shared by both children.
class SequenceTree {
 public:
  SequenceTree(const SearchSpace& space, int length)
      : global_(global_grover_matrix(space)),
        local_(BlockRotation::local_run(space, 1)),
        start_(initial_state(space)),
        length_(length) {}

  State3 step(const State3& s, bool local) const { return local ? local_.apply(s) : global_ * s; }

  /// State after the first `depth` queries encoded in `prefix`.
  State3 prefix_state(std::uint32_t prefix, int depth) const {
    State3 s = start_;
    for (int i = 0; i < depth; ++i) s = step(s, ((prefix >> i) & 1U) != 0);
    return s;
  }

  template <typename Leaf>
  void walk(int depth, const State3& s, std::uint32_t bits, Leaf& leaf) const {
    if (depth == length_) {
      leaf(bits, 1.0 - s.amp_bbar * s.amp_bbar);
      return;
    }
    walk(depth + 1, step(s, false), bits, leaf);
    walk(depth + 1, step(s, true), bits | (1U << depth), leaf);
  }

  /// Visits every leaf whose first `split` queries equal `prefix`.
  template <typename Leaf>
  void walk_subtree(std::uint32_t prefix, int split, Leaf& leaf) const {
    walk(split, prefix_state(prefix, split), prefix, leaf);
  }

 private:
  Matrix3 global_;
  BlockRotation local_;
  State3 start_;
  int length_;
};

}  // namespace detail

/// Maximum block success probability over all 2^k_tot sequences of k_tot
/// queries, with every co-optimal sequence (within kTieTolerance) in canonical
/// order. Sequences ending with local operators are listed only if no
/// co-optimal sequence ends with a global one.
inline EnumerationResult enumerate_max_probability(const SearchSpace& space, int k_tot,
                                                   int workers = 1) {
  if (k_tot < 1) throw ParameterError("k_tot must be at least 1");
  if (k_tot > kMaxEnumerationLength) {
    throw ResourceError("exhaustive enumeration is capped at k_tot <= " +
                        std::to_string(kMaxEnumerationLength) + ", got " + std::to_string(k_tot));
  }
  const unsigned threads = resolve_workers(workers);
  const detail::SequenceTree tree(space, k_tot);
  int split = 0;
  while ((1U << split) < 4 * threads && split < k_tot) ++split;
  const std::uint32_t subtrees = 1U << split;

  std::vector<double> local_max(threads, -std::numeric_limits<double>::infinity());
  run_workers(threads, [&](unsigned w) {
    double best = local_max[w];
    auto leaf = [&best](std::uint32_t, double p) { best = std::max(best, p); };
    for (std::uint32_t prefix = w; prefix < subtrees; prefix += threads)
      tree.walk_subtree(prefix, split, leaf);
    local_max[w] = best;
  });
  const double pr_max = *std::max_element(local_max.begin(), local_max.end());
  const double threshold = pr_max - kTieTolerance;

  struct Ties {
    std::vector<detail::TieKey> keys;
    std::uint64_t global_final = 0;
    std::uint64_t local_final = 0;
  };
  std::vector<Ties> ties(threads);
  run_workers(threads, [&](unsigned w) {
    Ties& mine = ties[w];
    auto trim = [&mine] {
      std::sort(mine.keys.begin(), mine.keys.end());
      if (mine.keys.size() > kMaxListedTies) mine.keys.resize(kMaxListedTies);
    };
    auto leaf = [&](std::uint32_t bits, double p) {
      if (p < threshold) return;
      const detail::TieKey key = detail::make_tie_key(bits, k_tot);
      ++(key.local_final ? mine.local_final : mine.global_final);
      mine.keys.push_back(key);
      if (mine.keys.size() > 4 * kMaxListedTies) trim();
    };
    for (std::uint32_t prefix = w; prefix < subtrees; prefix += threads)
      tree.walk_subtree(prefix, split, leaf);
    trim();
  });

  std::vector<detail::TieKey> keys;
  std::uint64_t global_final = 0, local_final = 0;
  for (const Ties& t : ties) {
    keys.insert(keys.end(), t.keys.begin(), t.keys.end());
    global_final += t.global_final;
    local_final += t.local_final;
  }
  std::sort(keys.begin(), keys.end());
  if (global_final > 0) {
    std::erase_if(keys, [](const detail::TieKey& k) { return k.local_final; });
  }
  if (keys.size() > kMaxListedTies) keys.resize(kMaxListedTies);

  EnumerationResult result;
  result.k_tot = k_tot;
  result.pr_max = clamp_probability(pr_max);
  result.tie_count = global_final > 0 ? global_final : local_final;
  for (const detail::TieKey& k : keys)
    result.optimal_sequences.push_back(OperatorSequence::from_bits(k.bits, k_tot));
  if (result.pr_max <= 0.0) throw NumericalError("maximal success probability is zero");
  result.expected_iterations = k_tot / result.pr_max;
  return result;
}

/// k_tot / Pr for a given sequence: mean query count under restart-on-failure.
inline double expected_iterations(const SearchSpace& space, const OperatorSequence& seq) {
  const double p = block_success_probability(space, seq);
  if (p <= 0.0) throw NumericalError("expected iterations undefined: success probability is zero");
  return static_cast<double>(seq.total_queries()) / p;
}

struct BudgetOptimum {
  int k_tot;
  double expected_iterations;
  EnumerationResult result;
};

/// argmin over k_tot in [k_lo, k_hi] of k_tot / Pr^max(k_tot); ties go to the smaller k_tot.
inline BudgetOptimum min_expected_over_budget(const SearchSpace& space, int k_lo, int k_hi,
                                              int workers = 1) {
  if (k_lo < 1 || k_hi < k_lo) throw ParameterError("empty or invalid k_tot range");
  std::optional<BudgetOptimum> best;
  for (int k = k_lo; k <= k_hi; ++k) {
    EnumerationResult r = enumerate_max_probability(space, k, workers);
    if (!best || r.expected_iterations < best->expected_iterations) {
      const double e = r.expected_iterations;
      best = BudgetOptimum{k, e, std::move(r)};
    }
  }
  return *best;
}

/// True for G_n G_m^{k2} G_n^{k1} with k1, k2 >= 0: in application order the
/// runs are [Global k1][Local k2][Global 1], where absent runs stand for zero.
inline bool is_grk_form(const OperatorSequence& seq) {
  const auto runs = seq.runs();
  if (runs.empty() || runs.back().kind != OpKind::Global) return false;
  switch (runs.size()) {
    case 1:
      return true;  // G_n^{k1+1}
    case 2:
      return runs[1].count == 1;  // k1 = 0
    case 3:
      return runs[2].count == 1;
    default:
      return false;
  }
}

struct TableRow {
  int n;
  int m;
  int k_tot;
  OperatorSequence sequence;
  std::string product;  // right-to-left operator notation
  double pr_max;
  double expected_iterations;
  bool is_grk;
  std::uint64_t tie_count;
  /// Smallest expected iteration count among the rows with this m.
  bool is_column_min = false;
};

/// One row per (m, k_tot): the optimal sequence and its probability and expectation.
inline std::vector<TableRow> table_sweep(int n, const std::vector<int>& m_values,
                                         const std::vector<int>& k_values, int workers = 1) {
  std::vector<TableRow> rows;
  for (int m : m_values) {
    const SearchSpace space(n, m);
    const std::size_t first = rows.size();
    for (int k : k_values) {
      const EnumerationResult r = enumerate_max_probability(space, k, workers);
      rows.push_back({n, m, k, r.best(), r.best().to_product(n, m), r.pr_max,
                      r.expected_iterations, is_grk_form(r.best()), r.tie_count});
    }
    auto column_min = std::min_element(
        rows.begin() + static_cast<std::ptrdiff_t>(first), rows.end(),
        [](const TableRow& x, const TableRow& y) {
          return x.expected_iterations < y.expected_iterations;
        });
    if (column_min != rows.end()) column_min->is_column_min = true;
  }
  return rows;
}

}  // namespace partial_search
