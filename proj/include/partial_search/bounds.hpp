#pragma once

// Closed-form results for full and partial search: Grover's optimal stopping
// point, GRK parameters, the maximal-probability bound, the optimal total
// query count and the minimal expected iteration number.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "partial_search/errors.hpp"
#include "partial_search/grk_scan.hpp"
#include "partial_search/roots.hpp"
#include "partial_search/search_space.hpp"
#include "partial_search/subspace.hpp"
#include "partial_search/workers.hpp"

namespace partial_search {

namespace detail {

// f(x) = x - sin(2x): stationary where 1 - 2cos(2x) = 0.
inline double f_grk(double x) { return x - std::sin(2.0 * x); }

// 1 - cos(4a) - 4a sin(4a): stationary points of 2a / (1 - cos 4a).
inline double lemma_h(double a) { return 1.0 - std::cos(4.0 * a) - 4.0 * a * std::sin(4.0 * a); }
inline double lemma_h_prime(double a) { return -16.0 * a * std::cos(4.0 * a); }
// Coefficient of gamma in the stationarity condition.
inline double lemma_p(double a, double eps) {
  return 2.0 * eps * std::sin(4.0 * a) - 8.0 * eps * a * std::cos(4.0 * a);
}

}  // namespace detail

struct BoundConstants {
  double f_argmin;           // pi/6
  double f_min;              // f(pi/6) = pi/6 - sqrt(3)/2
  double epsilon;            // -2 f_min
  double c_grk;              // sqrt(3)/2 - pi/6
  double alpha0_lemma;       // root of 1 - cos4a - 4a sin4a
  double varepsilon_lemma;   // first-order shift of that root per unit gamma
  double grover_kmin_coeff;  // root of tan(2a) = 4a
  double grover_pr_at_kmin;  // sin^2(2 a)
  double grover_emin_coeff;  // a / sin^2(2 a)
  double theorem2_c0;        // E_min ~ c0 sqrt(N) + c1 sqrt(b)
  double theorem2_c1;
  double crossover;          // m - n/2 where c0 sqrt(N) = K
};

inline BoundConstants compute_bound_constants() {
  BoundConstants c{};
  c.f_argmin = roots::bisect([](double x) { return 1.0 - 2.0 * std::cos(2.0 * x); }, 0.1, 1.0);
  c.f_min = detail::f_grk(c.f_argmin);
  c.epsilon = -2.0 * c.f_min;
  c.c_grk = -c.f_min;

  c.alpha0_lemma = roots::bisect(detail::lemma_h, 0.1, 0.7);
  c.varepsilon_lemma =
      -detail::lemma_p(c.alpha0_lemma, c.epsilon) / detail::lemma_h_prime(c.alpha0_lemma);

  c.grover_kmin_coeff =
      roots::bisect([](double a) { return std::sin(2.0 * a) - 4.0 * a * std::cos(2.0 * a); }, 0.1,
                    std::numbers::pi / 4);
  const double s2 = std::sin(2.0 * c.grover_kmin_coeff);
  c.grover_pr_at_kmin = s2 * s2;
  c.grover_emin_coeff = c.grover_kmin_coeff / c.grover_pr_at_kmin;

  const double a0 = c.alpha0_lemma;
  const double s = std::sin(2.0 * a0);
  const double e1 = c.varepsilon_lemma;
  c.theorem2_c0 = a0 / (s * s);
  c.theorem2_c1 = e1 / (s * s) - 2.0 * a0 * (2.0 * e1 + c.epsilon) * std::cos(2.0 * a0) / (s * s * s);
  c.crossover = -std::log2(c.theorem2_c0);
  return c;
}

inline const BoundConstants& bound_constants() {
  static const BoundConstants constants = compute_bound_constants();
  return constants;
}

// ---------------------------------------------------------------------------
// Full Grover search

struct GroverOptimum {
  double k_min;
  double pr;
  double e_min;
};

/// Continuous stationary point of E(k) = k / sin^2((2k+1) theta1), i.e. the
/// root of tan((2k+1) theta1) = 4 theta1 k on (0, pi/(4 theta1) - 1/2).
inline GroverOptimum grover_kmin(std::uint64_t N) {
  if (N < 4) throw ParameterError("grover_kmin needs N >= 4");
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(N)));
  auto stationarity = [theta](double k) {
    const double x = (2.0 * k + 1.0) * theta;
    return std::sin(x) - 4.0 * theta * k * std::cos(x);
  };
  const double hi = std::numbers::pi / (4.0 * theta) - 0.5;
  const auto bracket = roots::first_upward_crossing(stationarity, 0.0, hi, 4096);
  if (!bracket) {
    throw NumericalError("no interior stationary point of k/sin^2((2k+1)theta) for N=" +
                         std::to_string(N));
  }
  GroverOptimum out{};
  out.k_min = roots::bisect(stationarity, bracket->first, bracket->second);
  const double s = std::sin((2.0 * out.k_min + 1.0) * theta);
  out.pr = s * s;
  out.e_min = out.k_min / out.pr;
  return out;
}

struct GroverIntegerOptimum {
  std::uint64_t k;
  double pr;
  double e_min;
};

/// argmin over integers k >= 1 of k / sin^2((2k+1) theta1).
inline GroverIntegerOptimum grover_integer_optimum(std::uint64_t N) {
  if (N < 2) throw ParameterError("grover_integer_optimum needs N >= 2");
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(N)));
  const auto k_max = static_cast<std::uint64_t>(std::ceil(std::numbers::pi / (4.0 * theta))) + 1;
  GroverIntegerOptimum best{0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
    const double e = static_cast<double>(k) / (s * s);
    if (e < best.e_min) best = {k, s * s, e};
  }
  return best;
}

// ---------------------------------------------------------------------------
// GRK parameters

struct GrkParameters {
  double eta_K;
  double alpha_K;
  std::uint64_t k1;
  std::uint64_t k2;
};

/// k1 = pi/4 sqrt(N) - eta_K sqrt(b), k2 = alpha_K sqrt(b), rounded half to even.
inline GrkParameters grk_optimal_parameters(const SearchSpace& space) {
  const double K = static_cast<double>(space.block_count());
  if (space.block_count() < 3) {
    throw ParameterError("GRK parameters are undefined for K=2 (the first global run vanishes)");
  }
  GrkParameters p{};
  p.eta_K = 0.5 * std::sqrt(K) * std::atan(std::sqrt(3.0 * K - 4.0) / (K - 2.0));
  p.alpha_K = 0.5 * std::acos((K - 2.0) / (2.0 * (K - 1.0)));
  const double sqrt_n = std::sqrt(static_cast<double>(space.database_size()));
  const double sqrt_b = std::sqrt(static_cast<double>(space.block_size()));
  const double k1 = std::nearbyint(std::numbers::pi / 4.0 * sqrt_n - p.eta_K * sqrt_b);
  p.k1 = k1 > 0.0 ? static_cast<std::uint64_t>(k1) : 0;
  p.k2 = static_cast<std::uint64_t>(std::nearbyint(p.alpha_K * sqrt_b));
  return p;
}

// ---------------------------------------------------------------------------
// Maximal success probability for a fixed budget

/// sin^2(2 alpha) + eps gamma sin(4 alpha), clamped to [0, 1].
inline double theorem1_bound(double alpha, double gamma) {
  const double v = std::pow(std::sin(2.0 * alpha), 2) +
                   bound_constants().epsilon * gamma * std::sin(4.0 * alpha);
  return std::clamp(v, 0.0, 1.0);
}

/// Bound on the maximal block success probability at k_tot queries, with
/// alpha = (k_tot - 1) / sqrt(N).
inline double pr_max_bound(const SearchSpace& space, std::uint64_t k_tot) {
  if (k_tot < 1) throw ParameterError("k_tot must be at least 1");
  const double alpha =
      static_cast<double>(k_tot - 1) / std::sqrt(static_cast<double>(space.database_size()));
  if (!(alpha > 0.0 && alpha <= std::numbers::pi / 4.0)) {
    throw ParameterError("pr_max_bound needs 0 < (k_tot-1)/sqrt(N) <= pi/4");
  }
  return theorem1_bound(alpha, space.angles().gamma);
}

struct GrkMaxProbability {
  double pr;
  std::uint64_t k1;
  std::uint64_t k2;
};

/// Maximum of the block probability over G_n G_m^{k2} G_n^{k1} with
/// 1 + k1 + k2 = k_tot. Ties go to the smaller k2.
inline GrkMaxProbability grk_max_probability(const GrkEvaluator& eval, std::uint64_t k_tot) {
  if (k_tot < 1) throw ParameterError("k_tot must be at least 1");
  if (eval.max_k1() + 1 < k_tot) throw ParameterError("evaluator prefix cache too short");
  GrkMaxProbability best{-1.0, 0, 0};
  for (std::uint64_t k2 = 0; k2 < k_tot; ++k2) {
    const std::uint64_t k1 = k_tot - 1 - k2;
    const double p = 1.0 - std::pow(eval.state(k1, k2).amp_bbar, 2);
    if (p > best.pr) best = {p, k1, k2};
  }
  best.pr = clamp_probability(best.pr);
  return best;
}

inline GrkMaxProbability grk_max_probability(const SearchSpace& space, std::uint64_t k_tot) {
  if (k_tot < 1) throw ParameterError("k_tot must be at least 1");
  return grk_max_probability(GrkEvaluator(space, k_tot - 1), k_tot);
}

struct Figure3Record {
  std::uint64_t k_tot;
  double alpha;
  double pr_numeric;
  std::uint64_t k1_numeric;
  std::uint64_t k2_numeric;
  double bound;  // NaN outside 0 < alpha <= pi/4
  std::uint64_t k2_analytic;
  double pr_at_k2_analytic;  // NaN when k2_analytic >= k_tot
};

/// Numeric maximal probability against the bound for each k_tot.
inline std::vector<Figure3Record> figure3_sweep(const SearchSpace& space,
                                                const std::vector<std::uint64_t>& k_values,
                                                int workers = 1) {
  if (k_values.empty()) return {};
  const std::uint64_t k_hi = *std::max_element(k_values.begin(), k_values.end());
  if (*std::min_element(k_values.begin(), k_values.end()) < 1) {
    throw ParameterError("k_tot must be at least 1");
  }
  const GrkEvaluator eval(space, k_hi - 1);
  const double sqrt_n = std::sqrt(static_cast<double>(space.database_size()));
  const double sqrt_b = std::sqrt(static_cast<double>(space.block_size()));
  const auto k2_analytic = static_cast<std::uint64_t>(std::nearbyint(std::numbers::pi * sqrt_b / 6.0));
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<Figure3Record> out(k_values.size());
  const unsigned threads = std::min<unsigned>(resolve_workers(workers),
                                              static_cast<unsigned>(k_values.size()));
  run_workers(threads, [&](unsigned w) {
    for (std::size_t i = w; i < k_values.size(); i += threads) {
      const std::uint64_t k = k_values[i];
      const GrkMaxProbability numeric = grk_max_probability(eval, k);
      Figure3Record& r = out[i];
      r.k_tot = k;
      r.alpha = static_cast<double>(k - 1) / sqrt_n;
      r.pr_numeric = numeric.pr;
      r.k1_numeric = numeric.k1;
      r.k2_numeric = numeric.k2;
      r.bound = (r.alpha > 0.0 && r.alpha <= std::numbers::pi / 4.0) ? pr_max_bound(space, k) : nan;
      r.k2_analytic = k2_analytic;
      r.pr_at_k2_analytic =
          k2_analytic < k ? block_probability_of(eval.state(k - 1 - k2_analytic, k2_analytic)) : nan;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Minimal expected iteration number

/// k_tot ~ alpha0 sqrt(N) + varepsilon sqrt(b): the interior stationary point
/// of the expected iteration number. The other candidate is k_tot = 1.
inline double lemma_optimal_ktot(const SearchSpace& space) {
  const BoundConstants& c = bound_constants();
  return c.alpha0_lemma * std::sqrt(static_cast<double>(space.database_size())) +
         c.varepsilon_lemma * std::sqrt(static_cast<double>(space.block_size()));
}

struct ExpectedBoundBranches {
  double interior;  // c0 sqrt(N) + c1 sqrt(b)
  double single;    // K - 8K^2/N, the k_tot = 1 candidate
};

inline ExpectedBoundBranches min_expected_branches(const SearchSpace& space) {
  const BoundConstants& c = bound_constants();
  const double N = static_cast<double>(space.database_size());
  const double K = static_cast<double>(space.block_count());
  return {c.theorem2_c0 * std::sqrt(N) + c.theorem2_c1 * std::sqrt(static_cast<double>(space.block_size())),
          K - 8.0 * K * K / N};
}

/// Interior branch for m <= floor(n/2), single-query branch otherwise.
inline double min_expected_bound(const SearchSpace& space) {
  const ExpectedBoundBranches b = min_expected_branches(space);
  return space.m() <= space.n() / 2 ? b.interior : b.single;
}

/// pi/4 sqrt(N) - c_grk sqrt(b): queries of GRK run to (near) unit probability.
inline double grk_unit_probability_queries(const SearchSpace& space) {
  return std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(space.database_size())) -
         bound_constants().c_grk * std::sqrt(static_cast<double>(space.block_size()));
}

struct ExpectedScanGrid {
  std::uint64_t max_k1;
  GrkGrid grid;
};

/// k1 <= ceil(pi sqrt(N)/4) + 2 and k2 <= ceil(pi sqrt(b)/2).
inline ExpectedScanGrid expected_scan_grid(const SearchSpace& space) {
  const double sqrt_n = std::sqrt(static_cast<double>(space.database_size()));
  const double sqrt_b = std::sqrt(static_cast<double>(space.block_size()));
  const auto max_k1 = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * sqrt_n / 4.0)) + 2;
  const auto max_k2 = static_cast<std::uint64_t>(std::ceil(std::numbers::pi * sqrt_b / 2.0));
  return {max_k1, {max_k2, max_k1 + max_k2 + 1}};
}

/// Minimal (1 + k1 + k2) / Pr over the GRK family.
inline GrkScanResult grk_min_expected(const SearchSpace& space, int workers = 1) {
  const ExpectedScanGrid scan = expected_scan_grid(space);
  const GrkEvaluator eval(space, scan.max_k1);
  return minimize_over_grk(
      eval, scan.grid,
      [](const State3& s, std::uint64_t k1, std::uint64_t k2) {
        const double p = 1.0 - s.amp_bbar * s.amp_bbar;
        return p > 0.0 ? static_cast<double>(1 + k1 + k2) / p
                       : std::numeric_limits<double>::infinity();
      },
      resolve_workers(workers));
}

inline constexpr int kMaxFigure4Qubits = 26;

struct Figure4Record {
  int n;
  int m;
  double e_min;
  std::uint64_t k_tot;
  std::uint64_t k1;
  std::uint64_t k2;
  double bound_interior;
  double bound_single;
  double bound;  // branch selected by m versus floor(n/2)
  double grk_unit_reference;
};

/// For each m in [1, n-1]: numeric minimal expected iterations over the GRK
/// family next to both closed-form branches.
inline std::vector<Figure4Record> figure4_sweep(int n, int workers = 1) {
  if (n < 2 || n > kMaxFigure4Qubits) {
    throw ResourceError("figure4_sweep supports 2 <= n <= " + std::to_string(kMaxFigure4Qubits));
  }
  std::vector<Figure4Record> out;
  for (int m = 1; m < n; ++m) {
    const SearchSpace space(n, m);
    const GrkScanResult r = grk_min_expected(space, workers);
    const ExpectedBoundBranches b = min_expected_branches(space);
    out.push_back({n, m, r.value, r.total_queries(), r.k1, r.k2, b.interior, b.single,
                   min_expected_bound(space), grk_unit_probability_queries(space)});
  }
  return out;
}

}  // namespace partial_search
