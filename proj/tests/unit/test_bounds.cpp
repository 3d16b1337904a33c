#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "partial_search/bounds.hpp"
#include "partial_search/roots.hpp"

namespace ps = partial_search;
using std::numbers::pi;

namespace {

const ps::BoundConstants& C() { return ps::bound_constants(); }

/// Dense integer scan of k / sin^2((2k+1) theta1).
std::uint64_t integer_grover_argmin(std::uint64_t N) {
  const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(N)));
  std::uint64_t best_k = 1;
  double best = 1e300;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(pi / (4 * theta)) + 2; ++k) {
    const double e = static_cast<double>(k) / std::pow(std::sin((2.0 * k + 1.0) * theta), 2);
    if (e < best) {
      best = e;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace

TEST(Constants, DefiningIdentities) {
  EXPECT_NEAR(C().epsilon, -2.0 * (pi / 6 - std::sin(pi / 3)), 1e-12);
  EXPECT_NEAR(C().c_grk, std::sqrt(3.0) / 2 - pi / 6, 1e-12);
  EXPECT_NEAR(C().f_argmin, pi / 6, 1e-12);
}

TEST(Constants, RootResiduals) {
  const double a = C().alpha0_lemma;
  EXPECT_LE(std::abs(1 - std::cos(4 * a) - 4 * a * std::sin(4 * a)), 1e-12);
  const double g = C().grover_kmin_coeff;
  EXPECT_LE(std::abs(std::tan(2 * g) - 4 * g), 1e-10);
  EXPECT_LE(std::abs(1 - 2 * std::cos(2 * C().f_argmin)), 1e-10);
}

TEST(Constants, PrintedValues) {
  EXPECT_NEAR(C().f_min, -0.342427, 5e-7);
  EXPECT_NEAR(C().epsilon, 0.6849, 5e-5);
  EXPECT_NEAR(C().c_grk, 0.3424, 5e-5);
  EXPECT_NEAR(C().varepsilon_lemma, -0.4969, 5e-5);
  EXPECT_NEAR(C().grover_kmin_coeff, 0.5828, 5e-5);
  EXPECT_NEAR(C().grover_pr_at_kmin, 0.8446, 5e-5);
  EXPECT_NEAR(C().grover_emin_coeff, 0.69, 5e-3);
  EXPECT_NEAR(C().theorem2_c0, 0.69, 5e-3);
  EXPECT_NEAR(C().theorem2_c1, -0.4054, 5e-4);
  EXPECT_NEAR(C().crossover, 0.5353, 5e-5);
  // tan(2a) = 4a and 1 - cos 4a - 4a sin 4a = 0 share their root.
  EXPECT_NEAR(C().alpha0_lemma, C().grover_kmin_coeff, 1e-12);
}

TEST(Constants, LemmaCoefficientMatchesFiniteDifference) {
  // Solve the full stationarity condition at small gamma and compare the
  // shift of the root with the first-order coefficient.
  const double eps = C().epsilon;
  for (double gamma : {1e-4, 1e-5}) {
    auto full = [&](double a) {
      return 1 - std::cos(4 * a) - 4 * a * std::sin(4 * a) + 2 * eps * gamma * std::sin(4 * a) -
             8 * eps * gamma * a * std::cos(4 * a);
    };
    const double root = ps::roots::bisect(full, 0.4, 0.7);
    EXPECT_NEAR((root - C().alpha0_lemma) / gamma, C().varepsilon_lemma, 1e-3);
  }
}

TEST(Grover, LargeNLimits) {
  const std::uint64_t N = std::uint64_t{1} << 40;
  const auto g = ps::grover_kmin(N);
  const double root_n = std::sqrt(static_cast<double>(N));
  EXPECT_NEAR(g.k_min / root_n, 0.5828, 1e-4);
  EXPECT_NEAR(g.pr, 0.8446, 1e-4);
  EXPECT_NEAR(g.e_min / root_n, 0.69, 1e-3);
}

TEST(Grover, MillionItemsAgainstIntegerScan) {
  const std::uint64_t N = std::uint64_t{1} << 20;
  const auto g = ps::grover_kmin(N);
  const double root_n = 1024.0;
  EXPECT_LE(std::abs(g.e_min - 0.69 * root_n) / root_n, 0.01);
  const std::uint64_t k = integer_grover_argmin(N);
  EXPECT_LE(std::abs(g.k_min - static_cast<double>(k)), 1.0);
}

TEST(Grover, ContinuousAndIntegerOptimaAgree) {
  for (int n = 4; n <= 30; ++n) {
    const std::uint64_t N = std::uint64_t{1} << n;
    const auto g = ps::grover_kmin(N);
    const std::uint64_t k = integer_grover_argmin(N);
    EXPECT_LE(std::abs(g.k_min - static_cast<double>(k)), 1.0) << "n=" << n;
    EXPECT_EQ(ps::grover_integer_optimum(N).k, k) << "n=" << n;
    // residual of tan((2k+1) theta) = 4 theta k, written without the pole
    const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(N)));
    const double x = (2 * g.k_min + 1) * theta;
    EXPECT_LE(std::abs(std::sin(x) - 4 * theta * g.k_min * std::cos(x)), 1e-10) << "n=" << n;
  }
}

TEST(Grover, SmallDatabases) {
  const auto four = ps::grover_integer_optimum(4);
  EXPECT_EQ(four.k, 1U);
  EXPECT_NEAR(four.e_min, 1.0, 1e-12);
  // E(k) has no interior stationary point for N = 4 or 8.
  EXPECT_THROW(ps::grover_kmin(4), ps::NumericalError);
  EXPECT_THROW(ps::grover_kmin(8), ps::NumericalError);
  EXPECT_THROW(ps::grover_kmin(2), ps::ParameterError);
}

TEST(GrkParameters, ClosedForms) {
  for (int k_bits : {2, 3, 5, 10, 20}) {
    const ps::SearchSpace space(k_bits + 6, 6);
    const auto p = ps::grk_optimal_parameters(space);
    const double K = std::ldexp(1.0, k_bits);
    EXPECT_NEAR(std::cos(2 * p.alpha_K), (K - 2) / (2 * (K - 1)), 1e-12);
    EXPECT_NEAR(std::tan(2 * p.eta_K / std::sqrt(K)), std::sqrt(3 * K - 4) / (K - 2), 1e-9);
  }
  EXPECT_NEAR(std::cos(2 * ps::grk_optimal_parameters(ps::SearchSpace(8, 6)).alpha_K), 1.0 / 3, 1e-12);
}

TEST(GrkParameters, LargeBlockCountLimit) {
  const auto p = ps::grk_optimal_parameters(ps::SearchSpace(50, 10));
  EXPECT_NEAR(p.alpha_K, pi / 6, 1e-6);
  EXPECT_NEAR(p.eta_K, std::sqrt(3.0) / 2, 1e-6);
}

TEST(GrkParameters, NearUnitSuccess) {
  const ps::SearchSpace space(20, 10);
  const auto p = ps::grk_optimal_parameters(space);
  EXPECT_GE(ps::block_success_probability(space, ps::grk_sequence(p.k1, p.k2)), 0.999);
}

TEST(GrkParameters, RejectsTwoBlocks) {
  EXPECT_THROW(ps::grk_optimal_parameters(ps::SearchSpace(8, 7)), ps::ParameterError);
}

TEST(Theorem1, LeadingTerm) {
  EXPECT_NEAR(ps::theorem1_bound(pi / 8, 0.0), 0.5, 1e-15);
  EXPECT_THROW(ps::pr_max_bound(ps::SearchSpace(10, 4), 1), ps::ParameterError);
  EXPECT_THROW(ps::pr_max_bound(ps::SearchSpace(10, 4), 40), ps::ParameterError);
}

TEST(Theorem1, GapScalesWithGammaSquared) {
  std::vector<double> gammas, gaps;
  for (int n : {16, 20, 24, 28}) {
    const ps::SearchSpace space(n, n / 2);
    const std::uint64_t k_tot = 1 + static_cast<std::uint64_t>(std::llround(pi / 8 * std::ldexp(1.0, n / 2)));
    const auto numeric = ps::grk_max_probability(space, k_tot);
    gammas.push_back(space.angles().gamma);
    gaps.push_back(std::abs(numeric.pr - ps::pr_max_bound(space, k_tot)));
  }
  EXPECT_NEAR(oracle::loglog_slope(gammas, gaps), 2.0, 0.3);
}

TEST(Theorem1, CorollaryAdvantageOverFullSearch) {
  const ps::SearchSpace space(28, 14);
  const double gamma = space.angles().gamma;
  for (double alpha : {pi / 12, pi / 8}) {
    const std::uint64_t k_tot = 1 + static_cast<std::uint64_t>(std::llround(alpha * 16384.0));
    const double a = static_cast<double>(k_tot - 1) / 16384.0;
    const double gain = ps::grk_max_probability(space, k_tot).pr - std::pow(std::sin(2 * a), 2);
    const double predicted = C().epsilon * gamma * std::sin(4 * a);
    EXPECT_NEAR(gain / predicted, 1.0, 0.25) << alpha;
  }
}

TEST(Theorem1, BoundTracksNumericOptimumAtLargeN) {
  // n = 30, m = 10: gamma^2 ~ 1e-6; the observed gap is a few tens of gamma^2.
  const ps::SearchSpace space(30, 10);
  const double gamma = space.angles().gamma;
  std::vector<std::uint64_t> ks;
  for (double alpha : {0.1, 0.3, pi / 8, 0.5, 0.7}) ks.push_back(1 + std::llround(alpha * 32768.0));
  for (const auto& r : ps::figure3_sweep(space, ks)) {
    EXPECT_LE(std::abs(r.pr_numeric - r.bound), 100 * gamma * gamma) << r.k_tot;
  }
}

TEST(Theorem1, OptimalLocalRunIsIndependentOfBudget) {
  const ps::SearchSpace space(30, 20);
  std::vector<std::uint64_t> ks;
  for (double alpha : {0.1, 0.2, pi / 12, pi / 8, 0.5, 0.6, 0.7}) ks.push_back(1 + std::llround(alpha * 32768.0));
  for (const auto& r : ps::figure3_sweep(space, ks, 2)) {
    EXPECT_EQ(r.k2_numeric, r.k2_analytic) << "k_tot=" << r.k_tot;
    EXPECT_EQ(r.k2_analytic, 536U);
  }
}

TEST(Theorem1, OptimalLocalRunIsFloorOfCaptionValue) {
  // The optimizing k2 is budget independent but sits at floor(pi sqrt(b)/6),
  // one below the rounded caption value when the fraction exceeds one half.
  struct Case {
    int n, m;
    std::uint64_t k2;
  };
  for (const Case& c : {Case{16, 8, 8}, Case{20, 10, 16}, Case{24, 12, 33}, Case{28, 14, 67}, Case{30, 10, 16}}) {
    const ps::SearchSpace space(c.n, c.m);
    const double root_n = std::ldexp(1.0, c.n / 2);
    const double caption = pi * std::sqrt(static_cast<double>(space.block_size())) / 6;
    std::vector<std::uint64_t> ks;
    for (double alpha : {0.15, pi / 8, 0.6}) ks.push_back(1 + std::llround(alpha * root_n));
    for (const auto& r : ps::figure3_sweep(space, ks, 2)) {
      EXPECT_EQ(r.k2_numeric, c.k2) << c.n << "," << c.m << " k_tot=" << r.k_tot;
      EXPECT_EQ(r.k2_numeric, static_cast<std::uint64_t>(std::floor(caption)));
    }
  }
}

TEST(Figure3, SweepIsWorkerInvariant) {
  const ps::SearchSpace space(16, 8);
  std::vector<std::uint64_t> ks{2, 10, 50, 120, 203};
  const auto a = ps::figure3_sweep(space, ks, 1);
  const auto b = ps::figure3_sweep(space, ks, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].pr_numeric, b[i].pr_numeric);
    EXPECT_EQ(a[i].k2_numeric, b[i].k2_numeric);
  }
  EXPECT_TRUE(std::isnan(a.back().bound));  // alpha > pi/4
}

TEST(Lemma, OptimalTotalQueriesAgainstDenseScan) {
  const ps::SearchSpace space(24, 8);
  const double predicted = ps::lemma_optimal_ktot(space);
  const auto dense = oracle::dense_grk_min(space, 3219, 26, 1u << 20, oracle::block_of);
  EXPECT_LE(std::abs(static_cast<double>(1 + dense.k1 + dense.k2) - predicted), 2.0);
}

TEST(Theorem2, Branches) {
  // n=8, m=7 has K=2 blocks: K - 8K^2/N = 2 - 32/256.
  const ps::SearchSpace two_blocks(8, 7);
  const auto b = ps::min_expected_branches(two_blocks);
  EXPECT_DOUBLE_EQ(b.single, 1.875);
  EXPECT_DOUBLE_EQ(ps::min_expected_bound(two_blocks), b.single);
  const double one_query = 1.0 / ps::block_success_probability(two_blocks, {{ps::OpKind::Global, 1}});
  EXPECT_NEAR(one_query / b.single, 1.0, 0.05);
  const ps::SearchSpace small(20, 6);
  EXPECT_DOUBLE_EQ(ps::min_expected_bound(small), ps::min_expected_branches(small).interior);
  EXPECT_DOUBLE_EQ(ps::min_expected_bound(ps::SearchSpace(20, 10)),
                   ps::min_expected_branches(ps::SearchSpace(20, 10)).interior);
}

TEST(Theorem2, CrossoverWhereBranchesMeet) {
  // c0 sqrt(N) = K at m - n/2 = crossover, ignoring the sqrt(b) terms.
  EXPECT_NEAR(std::exp2(-C().crossover), C().theorem2_c0, 1e-12);
}

TEST(Figure4, NumericMinimumAgainstScanAndReferences) {
  const auto records = ps::figure4_sweep(16, 2);
  ASSERT_EQ(records.size(), 15U);
  for (const auto& r : records) {
    const ps::SearchSpace space(16, r.m);
    const auto scan = ps::expected_scan_grid(space);
    const auto dense = oracle::dense_grk_min(space, scan.max_k1, scan.grid.max_k2, scan.grid.max_total,
                                             oracle::block_of);
    EXPECT_NEAR(r.e_min, dense.e, 1e-9 * dense.e) << "m=" << r.m;
    if (r.m <= 8) {
      EXPECT_LE(r.e_min, r.grk_unit_reference) << "m=" << r.m;
    }
  }
  const auto& last = records.back();
  EXPECT_NEAR(last.e_min / last.bound_single, 1.0, 0.05);
}

TEST(Figure4, PhaseTransitionAtHalf) {
  for (int n : {16, 18, 20}) {
    const auto records = ps::figure4_sweep(n);
    const auto& below = records[static_cast<std::size_t>(n / 2 - 1)];
    const auto& above = records[static_cast<std::size_t>(n / 2)];
    ASSERT_EQ(below.m, n / 2);
    EXPECT_GT(below.k_tot, 1U) << "n=" << n;
    EXPECT_EQ(above.k_tot, 1U) << "n=" << n;
  }
  EXPECT_THROW(ps::figure4_sweep(ps::kMaxFigure4Qubits + 1), ps::ResourceError);
}

TEST(Figure4, LastBlockSplitTracksSingleQueryBranch) {
  for (int n : {12, 14, 16, 18}) {
    const auto records = ps::figure4_sweep(n);
    EXPECT_NEAR(records.back().e_min / records.back().bound_single, 1.0, 0.05) << n;
  }
}
