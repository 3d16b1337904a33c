#pragma once

// Expected per-QPU query counts for four ways of splitting a search over l
// quantum processors:
//   inner   - the database is cut into l parts, one Grover search per part
//   outer   - every QPU runs the same full Grover search
//   grk     - QPU j runs GRK to find the j-th group of n/l address bits
//   hybrid  - as grk, but every full outcome and the assembled address are
//             also checked classically

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "partial_search/bounds.hpp"
#include "partial_search/errors.hpp"
#include "partial_search/grk_scan.hpp"
#include "partial_search/roots.hpp"
#include "partial_search/search_space.hpp"
#include "partial_search/subspace.hpp"
#include "partial_search/workers.hpp"

namespace partial_search {

enum class Scheme { Inner, Outer, GrkBased, Hybrid };

inline std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Inner:
      return "inner";
    case Scheme::Outer:
      return "outer";
    case Scheme::GrkBased:
      return "grk";
    case Scheme::Hybrid:
      return "hybrid";
  }
  return "unknown";
}

struct SchemeResult {
  Scheme kind;
  std::uint64_t l;
  /// Oracle queries per QPU: k for inner/outer, 1 + k1 + k2 for grk/hybrid.
  std::uint64_t queries;
  std::optional<std::uint64_t> k1;
  std::optional<std::uint64_t> k2;
  double e_min;
  double pr_at_opt;
};

namespace detail {

inline void require_database(std::uint64_t N) {
  if (N < 2 || !std::has_single_bit(N)) throw ParameterError("N must be a power of two >= 2");
}

inline double outer_success(double single, std::uint64_t l) {
  // 1 - (1 - p)^l without cancellation for small p.
  if (single >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(l) * std::log1p(-single));
}

inline double power_probability(double p, std::uint64_t l) {
  return std::pow(p, static_cast<double>(l));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inner parallel: l independent searches over N/l items each

inline double inner_expected(std::uint64_t N, std::uint64_t l, std::uint64_t k) {
  detail::require_database(N);
  if (l < 1 || !std::has_single_bit(l)) {
    throw ParameterError("inner parallel search needs l to be a power of two (Definition 1)");
  }
  if (l > N) throw ParameterError("inner parallel search needs l <= N");
  const double theta = std::asin(std::sqrt(static_cast<double>(l) / static_cast<double>(N)));
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
  return static_cast<double>(k) / (s * s);
}

inline SchemeResult inner_min(std::uint64_t N, std::uint64_t l) {
  inner_expected(N, l, 1);  // validates
  const double ratio = static_cast<double>(N) / static_cast<double>(l);
  const auto k_max = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * std::sqrt(ratio) / 4.0)) + 2;
  SchemeResult best{Scheme::Inner, l, 0, {}, {}, std::numeric_limits<double>::infinity(), 0.0};
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const double e = inner_expected(N, l, k);
    if (e < best.e_min) {
      best.queries = k;
      best.e_min = e;
    }
  }
  best.pr_at_opt = static_cast<double>(best.queries) / best.e_min;
  return best;
}

// ---------------------------------------------------------------------------
// Outer parallel: l identical full searches

inline double outer_expected(std::uint64_t N, std::uint64_t l, std::uint64_t k) {
  detail::require_database(N);
  if (l < 1) throw ParameterError("outer parallel search needs l >= 1");
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(N)));
  const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
  return static_cast<double>(k) / detail::outer_success(s * s, l);
}

inline SchemeResult outer_min(std::uint64_t N, std::uint64_t l) {
  outer_expected(N, l, 1);
  const auto k_max = static_cast<std::uint64_t>(
      std::ceil(std::numbers::pi * std::sqrt(static_cast<double>(N)) / 4.0));
  SchemeResult best{Scheme::Outer, l, 0, {}, {}, std::numeric_limits<double>::infinity(), 0.0};
  for (std::uint64_t k = 1; k <= std::max<std::uint64_t>(k_max, 1); ++k) {
    const double e = outer_expected(N, l, k);
    if (e < best.e_min) {
      best.queries = k;
      best.e_min = e;
    }
  }
  best.pr_at_opt = static_cast<double>(best.queries) / best.e_min;
  return best;
}

// ---------------------------------------------------------------------------
// GRK-based and hybrid: l QPUs, each locating n/l address bits

/// Space of one QPU: the n/l bits it must find are the block bits, so m = n - n/l.
inline SearchSpace parallel_space(int n, std::uint64_t l) {
  if (n < 1 || n > kMaxQubits) throw ParameterError("n out of range");
  if (l < 1 || static_cast<std::uint64_t>(n) % l != 0) {
    throw ParameterError("GRK-based and hybrid schemes need l to divide n (Definitions 3 and 4), got n=" +
                         std::to_string(n) + ", l=" + std::to_string(l));
  }
  return SearchSpace(n, n - n / static_cast<int>(l));
}

namespace detail {

inline void require_split(const SearchSpace& space, std::uint64_t l) {
  if (l < 1 || l * static_cast<std::uint64_t>(space.n() - space.m()) !=
                   static_cast<std::uint64_t>(space.n())) {
    throw ParameterError("GRK-based and hybrid schemes need l*(n-m) = n (Definitions 3 and 4)");
  }
}

inline double grk_success(const State3& s, std::uint64_t l) {
  return power_probability(1.0 - s.amp_bbar * s.amp_bbar, l);
}

inline double hybrid_success(const State3& s, std::uint64_t l) {
  const double block = 1.0 - s.amp_bbar * s.amp_bbar;
  const double target = s.amp_t * s.amp_t;
  return 1.0 - (1.0 - power_probability(block, l)) * power_probability(1.0 - target, l);
}

struct ParallelScan {
  std::uint64_t max_k1;
  GrkGrid grid;
};

/// 1 + k1 + k2 <= ceil(pi sqrt(N)/4) + ceil(sqrt(b)); k2 <= ceil(pi sqrt(b)/2).
inline ParallelScan parallel_scan(const SearchSpace& space, bool allow_k2) {
  const double sqrt_n = std::sqrt(static_cast<double>(space.database_size()));
  const double sqrt_b = std::sqrt(static_cast<double>(space.block_size()));
  const auto total = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * sqrt_n / 4.0)) +
                     static_cast<std::uint64_t>(std::ceil(sqrt_b));
  const auto max_k2 =
      allow_k2 ? static_cast<std::uint64_t>(std::ceil(std::numbers::pi * sqrt_b / 2.0)) : 0;
  return {total - 1, {max_k2, total}};
}

template <typename Success>
SchemeResult minimize_parallel(Scheme kind, const SearchSpace& space, std::uint64_t l,
                               bool allow_k2, int workers, Success success) {
  const ParallelScan scan = parallel_scan(space, allow_k2);
  const GrkEvaluator eval(space, scan.max_k1);
  const GrkScanResult r = minimize_over_grk(
      eval, scan.grid,
      [&](const State3& s, std::uint64_t k1, std::uint64_t k2) {
        const double p = success(s, l);
        return p > 0.0 ? static_cast<double>(1 + k1 + k2) / p
                       : std::numeric_limits<double>::infinity();
      },
      resolve_workers(workers));
  return {kind, l, r.total_queries(), r.k1, r.k2, r.value, success(r.state, l)};
}

}  // namespace detail

/// (1 + k1 + k2) / Pr^l: every QPU must return its block bits.
inline double grk_parallel_expected(const SearchSpace& space, std::uint64_t l, std::uint64_t k1,
                                    std::uint64_t k2) {
  detail::require_split(space, l);
  const State3 s = apply_sequence(space, grk_sequence(k1, k2));
  return static_cast<double>(1 + k1 + k2) / detail::grk_success(s, l);
}

inline SchemeResult grk_parallel_min(const SearchSpace& space, std::uint64_t l, int workers = 1) {
  detail::require_split(space, l);
  return detail::minimize_parallel(Scheme::GrkBased, space, l, true, workers, detail::grk_success);
}

/// (1 + k1 + k2) / (1 - (1 - Pr_block^l)(1 - Pr_target)^l).
inline double hybrid_expected(const SearchSpace& space, std::uint64_t l, std::uint64_t k1,
                              std::uint64_t k2) {
  detail::require_split(space, l);
  const State3 s = apply_sequence(space, grk_sequence(k1, k2));
  return static_cast<double>(1 + k1 + k2) / detail::hybrid_success(s, l);
}

/// With allow_k2 = false only G_n^{k1+1} is scanned.
inline SchemeResult hybrid_min(const SearchSpace& space, std::uint64_t l, bool allow_k2,
                               int workers = 1) {
  detail::require_split(space, l);
  return detail::minimize_parallel(Scheme::Hybrid, space, l, allow_k2, workers,
                                   detail::hybrid_success);
}

// ---------------------------------------------------------------------------
// Asymptotics

struct ParallelConstants {
  double large_l_root;          // u with (1 + 2u) e^{-u} = 1
  double large_l_kmin_coeff;    // sqrt(u)/2
  double large_l_emin_coeff;    // sqrt(u) / (2 (1 - e^{-u})), shared by outer and hybrid
  double hybrid_l2_floor;       // 2 pi / 13
  double grk_l2_alpha0;         // root of tan(2a) = 8a
  double grk_l2_coeff;          // a / sin^4(2a)
  double grk_l2_correction;     // eps / (2 sin^4(2a)), coefficient of N^{1/4}
};

inline ParallelConstants compute_parallel_constants() {
  ParallelConstants c{};
  c.large_l_root =
      roots::bisect([](double u) { return (1.0 + 2.0 * u) * std::exp(-u) - 1.0; }, 0.5, 3.0);
  c.large_l_kmin_coeff = std::sqrt(c.large_l_root) / 2.0;
  c.large_l_emin_coeff = std::sqrt(c.large_l_root) / (2.0 * (-std::expm1(-c.large_l_root)));
  c.hybrid_l2_floor = 2.0 * std::numbers::pi / 13.0;
  c.grk_l2_alpha0 =
      roots::bisect([](double a) { return std::sin(2.0 * a) - 8.0 * a * std::cos(2.0 * a); }, 0.5,
                    std::numbers::pi / 4);
  const double s4 = std::pow(std::sin(2.0 * c.grk_l2_alpha0), 4);
  c.grk_l2_coeff = c.grk_l2_alpha0 / s4;
  c.grk_l2_correction = bound_constants().epsilon / (2.0 * s4);
  return c;
}

inline const ParallelConstants& parallel_constants() {
  static const ParallelConstants constants = compute_parallel_constants();
  return constants;
}

/// Expected iterations of the l = 2 hybrid scheme with k2 = 0, in units of
/// sqrt(N), as a function of phi = 2 k theta1.
inline double hybrid_l2_curve(double phi) {
  const double s4 = std::pow(std::sin(phi), 4);
  const double c4 = std::pow(std::cos(phi), 4);
  return phi / (2.0 * (1.0 - (1.0 - s4) * c4));
}

/// (2 pi / 13) sqrt(N): the curve evaluated at phi = pi/4.
inline double hybrid_l2_lower_bound(std::uint64_t N) {
  return parallel_constants().hybrid_l2_floor * std::sqrt(static_cast<double>(N));
}

struct CurveMinimum {
  double phi;
  double value;
};

/// Minimum of hybrid_l2_curve over a uniform grid on (0, pi/2).
inline CurveMinimum hybrid_l2_curve_minimum(int samples = 200000) {
  CurveMinimum best{0.0, std::numeric_limits<double>::infinity()};
  for (int i = 1; i < samples; ++i) {
    const double phi = std::numbers::pi / 2.0 * i / samples;
    const double v = hybrid_l2_curve(phi);
    if (v < best.value) best = {phi, v};
  }
  return best;
}

struct Asymptotic {
  double k_min;
  double e_min;
};

/// Hybrid scheme at l = n with k2 = 0, for large n.
inline Asymptotic hybrid_large_l_asymptotic(int n) {
  if (n < 1 || n > kMaxQubits) throw ParameterError("n out of range");
  const ParallelConstants& c = parallel_constants();
  const double scale = std::sqrt(std::ldexp(1.0, n) / n);
  return {c.large_l_kmin_coeff * scale, c.large_l_emin_coeff * scale};
}

/// Outer scheme for large l.
inline double outer_large_l_asymptotic(std::uint64_t N, std::uint64_t l) {
  return parallel_constants().large_l_emin_coeff *
         std::sqrt(static_cast<double>(N) / static_cast<double>(l));
}

/// GRK-based scheme at l = 2.
inline double grk_parallel_l2_asymptotic(std::uint64_t N) {
  const ParallelConstants& c = parallel_constants();
  const double root_n = std::sqrt(static_cast<double>(N));
  return c.grk_l2_coeff * root_n - c.grk_l2_correction * std::sqrt(root_n);
}

// ---------------------------------------------------------------------------
// Comparison over l

struct SchemeEntry {
  Scheme kind;
  std::uint64_t l;
  std::optional<SchemeResult> result;
  std::string reason;  // why the scheme is not admissible at this l
  bool allow_k2 = true;
};

/// Every scheme at every l in l_values. Inadmissible pairs carry a reason.
/// The hybrid scheme is evaluated with and without the local run.
inline std::vector<SchemeEntry> compare_schemes(int n, const std::vector<std::uint64_t>& l_values,
                                                int workers = 1) {
  if (n < 1 || n > kMaxQubits) throw ParameterError("n out of range");
  const std::uint64_t N = std::uint64_t{1} << n;
  std::vector<SchemeEntry> out;
  for (std::uint64_t l : l_values) {
    if (l < 1) throw ParameterError("l must be at least 1");
    if (std::has_single_bit(l) && l <= N) {
      out.push_back({Scheme::Inner, l, inner_min(N, l), ""});
    } else {
      out.push_back({Scheme::Inner, l, std::nullopt, "l is not a power of two"});
    }
    out.push_back({Scheme::Outer, l, outer_min(N, l), ""});
    if (static_cast<std::uint64_t>(n) % l == 0) {
      const SearchSpace space = parallel_space(n, l);
      out.push_back({Scheme::GrkBased, l, grk_parallel_min(space, l, workers), ""});
      out.push_back({Scheme::Hybrid, l, hybrid_min(space, l, false, workers), "", false});
      out.push_back({Scheme::Hybrid, l, hybrid_min(space, l, true, workers), "", true});
    } else {
      out.push_back({Scheme::GrkBased, l, std::nullopt, "l does not divide n"});
      out.push_back({Scheme::Hybrid, l, std::nullopt, "l does not divide n", false});
      out.push_back({Scheme::Hybrid, l, std::nullopt, "l does not divide n", true});
    }
  }
  return out;
}

}  // namespace partial_search
