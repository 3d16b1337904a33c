#pragma once

// Brute-force simulation of the full 2^n-dimensional state vector. Used as an
// independent check on the three-dimensional reduction in subspace.hpp.
//
// Amplitudes are stored as real numbers. The oracle I - 2|t><t| and both
// diffusion operators 2|s><s| - I are real reflections, and the initial state
// is real, so every reachable state is real.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "partial_search/errors.hpp"
#include "partial_search/search_space.hpp"
#include "partial_search/subspace.hpp"

namespace partial_search::statevec {

inline constexpr int kMaxSimulatedQubits = 14;
inline constexpr std::uint64_t kDefaultSeed = 42;

class FullState {
 public:
  /// Uniform superposition over 2^n items with a single marked index.
  FullState(int n, std::uint64_t target_index) : n_(n), target_(target_index) {
    if (n < 1 || n > kMaxSimulatedQubits) {
      throw ResourceError("state-vector simulation supports 1 <= n <= " +
                          std::to_string(kMaxSimulatedQubits) + ", got n=" + std::to_string(n));
    }
    const std::uint64_t size = std::uint64_t{1} << n;
    if (target_index >= size) {
      throw ParameterError("target index " + std::to_string(target_index) + " outside [0, 2^" +
                           std::to_string(n) + ")");
    }
    amplitudes_.assign(size, 1.0 / std::sqrt(static_cast<double>(size)));
  }

  int n() const { return n_; }
  std::uint64_t target_index() const { return target_; }
  std::size_t size() const { return amplitudes_.size(); }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  std::vector<double>& amplitudes() { return amplitudes_; }

  double norm_squared() const {
    return std::inner_product(amplitudes_.begin(), amplitudes_.end(), amplitudes_.begin(), 0.0);
  }

 private:
  int n_;
  std::uint64_t target_;
  std::vector<double> amplitudes_;
};

inline void reflect_about_mean(std::vector<double>::iterator first,
                               std::vector<double>::iterator last) {
  const double count = static_cast<double>(last - first);
  const double twice_mean = 2.0 * std::accumulate(first, last, 0.0) / count;
  for (auto it = first; it != last; ++it) *it = twice_mean - *it;
}

/// O_t: flips the sign of the marked amplitude.
inline FullState& apply_oracle(FullState& state) {
  auto& v = state.amplitudes();
  v[state.target_index()] = -v[state.target_index()];
  return state;
}

/// D_n = 2|s_n><s_n| - I, i.e. v <- 2 mean(v) - v.
inline FullState& apply_global_diffusion(FullState& state) {
  auto& v = state.amplitudes();
  reflect_about_mean(v.begin(), v.end());
  return state;
}

/// D_m = I (x) (2|s_m><s_m| - I): reflection about the mean inside each
/// contiguous block [j*b, (j+1)*b). Block size 1 (m = 0) makes it the identity.
inline FullState& apply_local_diffusion(FullState& state, int m) {
  if (m < 0 || m >= state.n()) {
    throw ParameterError("local diffusion needs 0 <= m < n, got m=" + std::to_string(m));
  }
  auto& v = state.amplitudes();
  const std::size_t block = std::size_t{1} << m;
  for (std::size_t start = 0; start < v.size(); start += block) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(start);
    reflect_about_mean(first, first + static_cast<std::ptrdiff_t>(block));
  }
  return state;
}

inline FullState& apply_global_grover(FullState& state) {
  return apply_global_diffusion(apply_oracle(state));
}

inline FullState& apply_local_grover(FullState& state, int m) {
  return apply_local_diffusion(apply_oracle(state), m);
}

inline FullState& apply_sequence(FullState& state, int m, const OperatorSequence& seq) {
  for (const Run& run : seq.runs()) {
    for (std::uint64_t i = 0; i < run.count; ++i) {
      if (run.kind == OpKind::Global) {
        apply_global_grover(state);
      } else {
        apply_local_grover(state, m);
      }
    }
  }
  return state;
}

/// Coordinates of a full state in the (|t>, |bt'>, |b'>) basis.
inline State3 project(const FullState& state, int m) {
  const auto& v = state.amplitudes();
  const std::uint64_t block = std::uint64_t{1} << m;
  const std::uint64_t t = state.target_index();
  const std::uint64_t first = (t / block) * block;
  double in_block = 0.0, total = 0.0;
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    total += v[i];
    if (i >= first && i < first + block && i != t) in_block += v[i];
  }
  const double outside = total - in_block - v[t];
  const double items = static_cast<double>(v.size());
  const double b = static_cast<double>(block);
  State3 out;
  out.amp_t = v[t];
  out.amp_bt = block > 1 ? in_block / std::sqrt(b - 1.0) : 0.0;
  out.amp_bbar = outside / std::sqrt(items - b);
  return out;
}

struct SimulationResult {
  double block_prob;
  double target_prob;
  State3 projected;
  /// |v|^2 - |projection|^2: weight outside the three-dimensional span.
  double residual;
};

inline SimulationResult simulate_sequence(int n, int m, std::uint64_t target_index,
                                          const OperatorSequence& seq) {
  const SearchSpace space(n, m);
  FullState state(space.n(), target_index);
  apply_sequence(state, m, seq);
  const auto& v = state.amplitudes();
  const std::uint64_t block = space.block_size();
  const std::uint64_t first = (target_index / block) * block;
  double block_prob = 0.0;
  for (std::uint64_t i = first; i < first + block; ++i) block_prob += v[i] * v[i];
  SimulationResult out;
  out.block_prob = block_prob;
  out.target_prob = v[target_index] * v[target_index];
  out.projected = project(state, m);
  out.residual = state.norm_squared() - out.projected.norm_squared();
  return out;
}

struct VerificationReport {
  int n = 0;
  int m = 0;
  std::uint64_t seed = kDefaultSeed;
  int sequences = 0;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  OperatorSequence worst_sequence;
  std::uint64_t worst_target = 0;
  /// Largest difference of block/target probabilities across target indices.
  double max_target_variation = 0.0;
  bool passed = true;
};

class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(VerificationReport report)
      : std::runtime_error("subspace verification failed: deviation " +
                           std::to_string(report.max_deviation) + " for sequence " +
                           report.worst_sequence.to_tokens()),
        report_(std::move(report)) {}

  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

/// Random operator sequence with 0..max_k queries, each kind drawn uniformly.
inline OperatorSequence random_sequence(std::mt19937_64& rng, int max_k) {
  std::uniform_int_distribution<int> length(0, max_k);
  std::bernoulli_distribution local(0.5);
  OperatorSequence seq;
  for (int i = length(rng); i > 0; --i) seq.append(local(rng) ? OpKind::Local : OpKind::Global);
  return seq;
}

/// Compares the subspace dynamics against full simulation on random sequences
/// and random target indices. Each sequence is also replayed with a second
/// target index to confirm the dynamics do not depend on where the target is.
/// Throws VerificationError if the worst deviation exceeds `tol`.
inline VerificationReport verify_subspace(int n, int m, int num_sequences, int max_k, double tol,
                                          std::uint64_t seed = kDefaultSeed) {
  const SearchSpace space(n, m);
  if (n > kMaxSimulatedQubits) {
    throw ResourceError("verification supports n <= " + std::to_string(kMaxSimulatedQubits));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick_target(0, space.database_size() - 1);

  VerificationReport report;
  report.n = n;
  report.m = m;
  report.seed = seed;
  report.sequences = num_sequences;
  report.tolerance = tol;
  for (int i = 0; i < num_sequences; ++i) {
    const OperatorSequence seq = random_sequence(rng, max_k);
    const std::uint64_t target = pick_target(rng);
    const std::uint64_t other_target = pick_target(rng);
    const SimulationResult full = simulate_sequence(n, m, target, seq);
    const SimulationResult other = simulate_sequence(n, m, other_target, seq);
    const State3 reduced = apply_sequence(space, seq);

    const double deviation =
        std::max({std::abs(full.projected.amp_t - reduced.amp_t),
                  std::abs(full.projected.amp_bt - reduced.amp_bt),
                  std::abs(full.projected.amp_bbar - reduced.amp_bbar),
                  std::abs(full.residual)});
    const double variation = std::max(std::abs(full.block_prob - other.block_prob),
                                      std::abs(full.target_prob - other.target_prob));
    report.max_target_variation = std::max(report.max_target_variation, variation);
    if (deviation > report.max_deviation || i == 0) {
      report.max_deviation = std::max(report.max_deviation, deviation);
      report.worst_sequence = seq;
      report.worst_target = target;
    }
  }
  report.passed = report.max_deviation <= tol && report.max_target_variation <= tol;
  if (!report.passed) throw VerificationError(report);
  return report;
}

}  // namespace partial_search::statevec
