// Copyright 2026 The Crowdsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "crowdsearch/hetero.hpp"
#include "oracles.hpp"

namespace cs = crowdsearch;

namespace {

const auto kUniform = cs::CostDistribution::uniform(0, 1);
const auto kShifted = cs::CostDistribution::uniform(0.25, 1.25);

cs::CostDistribution kinked_cdf() {
  return cs::CostDistribution::piecewise_linear({{0, 0}, {3.0 / 7, 0.4}, {4.0 / 7, 0.8}, {1, 1}});
}

std::vector<double> sorted_q(std::mt19937_64& g, int n, double lo, double hi) {
  std::vector<double> q(n);
  for (double& x : q) x = oracle::uniform(g, lo, hi);
  std::sort(q.rbegin(), q.rend());
  return q;
}

TEST(HeteroContest, SortsAndRemembersOrder) {
  const cs::HeteroContest h(kUniform, {0.2, 0.9, 0.5}, 1);
  EXPECT_EQ(h.q(), (std::vector<double>{0.9, 0.5, 0.2}));
  EXPECT_EQ(h.order(), (std::vector<std::size_t>{1, 2, 0}));
  const std::vector<double> sorted = {10, 20, 30};
  EXPECT_EQ(h.to_input_order(sorted), (std::vector<double>{30, 10, 20}));
  EXPECT_THROW(cs::HeteroContest(kUniform, {0.2, 0.0}, 1), cs::ValidationError);
  EXPECT_THROW(cs::HeteroContest(kUniform, {}, 1), cs::ValidationError);
  EXPECT_THROW(cs::HeteroContest(kUniform, {0.5}, 0), cs::ValidationError);
}

TEST(PoissonBinomial, SumsToOneAndMatchesEnumeration) {
  auto g = oracle::rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = static_cast<int>(oracle::uniform(g, 0, 13));
    std::vector<double> p(m);
    for (double& x : p) x = oracle::uniform(g, 0, 1);
    const auto pmf = cs::poisson_binomial_pmf(p);
    EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
    std::vector<long double> brute(m + 1, 0.0L);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      long double pr = 1.0L;
      int k = 0;
      for (int j = 0; j < m; ++j) {
        const bool hit = mask >> j & 1U;
        pr *= hit ? p[j] : 1.0L - p[j];
        k += hit;
      }
      brute[k] += pr;
    }
    for (int k = 0; k <= m; ++k) EXPECT_NEAR(pmf[k], static_cast<double>(brute[k]), 1e-12);
  }
}

TEST(PsiI, Examples) {
  const cs::HeteroContest sym(kUniform, {0.6, 0.6, 0.6, 0.6}, 1);
  const std::vector<double> rivals = {0.4, 0.4, 0.4};
  EXPECT_NEAR(cs::psi_i(sym, 2, rivals), cs::phi(kUniform, {4, 0.6, 1}, 0.4), 1e-15);
  const cs::HeteroContest h(kShifted, {0.9, 0.5, 0.3}, 1);
  const std::vector<double> bottom = {0.25, 0.25};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(cs::psi_i(h, i, bottom), h.q()[i]);
  EXPECT_THROW(cs::psi_i(h, 3, bottom), cs::ValidationError);
  EXPECT_THROW(cs::psi_i(h, 0, rivals), cs::ValidationError);
}

TEST(PsiI, MatchesSubsetEnumeration) {
  auto g = oracle::rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 12));
    const auto q = sorted_q(g, n, 0.05, 1);
    const cs::HeteroContest h(kUniform, q, 1);
    std::vector<double> c(n);
    for (double& x : c) x = oracle::uniform(g, 0, 1);
    for (int i = 0; i < n; ++i) {
      std::vector<double> pi;
      for (int j = 0; j < n; ++j) {
        if (j != i) pi.push_back(h.q()[j] * c[j]);
      }
      EXPECT_NEAR(cs::psi_i_full(h, i, c), oracle::psi_subsets(h.q()[i], pi), 1e-12);
    }
  }
}

TEST(SolveThresholds, SymmetricReduction) {
  for (int n : {1, 2, 5, 20}) {
    const cs::HeteroContest h(kUniform, std::vector<double>(n, 0.6), 1);
    const auto t = cs::solve_thresholds(h);
    EXPECT_TRUE(t.converged);
    const double c = cs::solve_threshold(kUniform, {double(n), 0.6, 1}).threshold;
    for (double x : t.c) EXPECT_NEAR(x, c, 1e-10);
  }
}

TEST(SolveThresholds, HigherDiscoveryMeansHigherThreshold) {
  auto g = oracle::rng(53);
  int converged = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(oracle::uniform(g, 0, 8));
    const auto q = sorted_q(g, n, 0.1, 1);
    const auto d = trial % 2 ? kUniform : kShifted;
    const cs::HeteroContest h(d, q, oracle::uniform(g, 0.5, 2));
    const auto t = cs::solve_thresholds(h);
    if (!t.converged) continue;
    ++converged;
    EXPECT_LE(t.max_residual, 1e-9);
    for (int i = 0; i + 1 < n; ++i) {
      if (q[i] > q[i + 1] && t.c[i + 1] > d.lower() && t.c[i] < d.upper()) {
        EXPECT_GT(t.c[i], t.c[i + 1]) << "trial " << trial;
      }
    }
  }
  EXPECT_GE(converged, 90);
}

TEST(SolveThresholds, SmallPerturbationMovesSuccessLittle) {
  const auto d = cs::CostDistribution::power(20);
  const double base = cs::solve_threshold(d, {3, 1, 1}).success_prob;
  // The branch through the symmetric point folds near eps = 6.6e-4.
  for (double eps : {1e-4, 1e-5, 1e-6}) {
    const cs::HeteroContest h(d, {1.0, 1.0 - eps, 1.0 - 2 * eps}, 1);
    const auto t = cs::solve_thresholds(h);
    ASSERT_TRUE(t.converged);
    EXPECT_LE(t.max_residual, 1e-9);
    EXPECT_LT(std::abs(cs::success_probability_hetero(h, t.c) - base), 2 * eps);
  }
}

TEST(SolveThresholds, OrderingCanFailWithSteepBestResponses) {
  // For F = c^20, V = 1 a rival's threshold moves the best response with
  // slope about -1.13 at the symmetric point, so best responses can cross
  // more than once. The equilibrium next to the symmetric one then ranks
  // thresholds against q; checked here with subset enumeration.
  const auto d = cs::CostDistribution::power(20);
  const std::vector<double> q = {1.0, 0.9999, 0.9998};
  const cs::HeteroContest h(d, q, 1);
  const double e = 1e-6;
  const double c = cs::solve_threshold(d, {3, 1, 1}).threshold;
  const std::vector<double> up = {c, c + e, c}, down = {c, c - e, c};
  EXPECT_LT((cs::psi_i_full(h, 0, up) - cs::psi_i_full(h, 0, down)) / (2 * e), -1.0);

  const auto t = cs::solve_thresholds(h);
  ASSERT_TRUE(t.converged);
  for (int i = 0; i < 3; ++i) {
    std::vector<double> pi;
    for (int j = 0; j < 3; ++j) {
      if (j != i) pi.push_back(q[j] * d.cdf(t.c[j]));
    }
    EXPECT_NEAR(t.c[i], oracle::psi_subsets(q[i], pi), 1e-12);
    EXPECT_GT(t.c[i], d.lower());
    EXPECT_LT(t.c[i], d.upper());
  }
  EXPECT_LT(t.c[0], t.c[1]);
  EXPECT_LT(t.c[1], t.c[2]);
}

TEST(SuccessProbabilityHetero, ProductEqualsDecomposition) {
  auto g = oracle::rng(54);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 10));
    const cs::HeteroContest h(kShifted, sorted_q(g, n, 0.05, 1), 1);
    std::vector<double> c(n);
    for (double& x : c) x = oracle::uniform(g, 0.25, 1.25);
    EXPECT_NEAR(cs::success_probability_hetero(h, c), cs::success_decomposition(h, c), 1e-10);
  }
  const cs::HeteroContest h(kShifted, {0.9, 0.4}, 1);
  const std::vector<double> bottom = {0.25, 0.25};
  EXPECT_EQ(cs::success_probability_hetero(h, bottom), 0.0);
  const cs::HeteroContest sym(kUniform, {0.4, 0.4, 0.4}, 1);
  const std::vector<double> same = {0.3, 0.3, 0.3};
  EXPECT_NEAR(cs::success_probability_hetero(sym, same),
              cs::success_probability(kUniform, {3, 0.4, 1}, 0.3), 1e-15);
}

TEST(SolvePrincipalHetero, SymmetricReduction) {
  const cs::HeteroContest h(kUniform, {0.5, 0.5}, 1);
  const auto r = cs::solve_principal_hetero(h, 4);
  const auto s = cs::optimal_prize(kUniform, {4, 2, 0.5});
  for (double c : r.thresholds.c) EXPECT_NEAR(c, s.threshold, 1e-10);
  for (double v : r.implied_prizes) EXPECT_NEAR(v, s.prize, 1e-9);
  EXPECT_TRUE(r.consistent);
  EXPECT_NEAR(r.constrained_prize, s.prize, 1e-6);
}

TEST(SolvePrincipalHetero, OrderingAndGridOracle) {
  const cs::HeteroContest h(kUniform, {0.9, 0.5}, 1);
  const double W = 1.5;
  const auto r = cs::solve_principal_hetero(h, W);
  ASSERT_TRUE(r.thresholds.converged);
  EXPECT_GT(r.thresholds.c[0], r.thresholds.c[1]);
  // Distinct q: the per-agent prizes disagree, so no single prize implements it.
  EXPECT_FALSE(r.consistent);
  EXPECT_GT(r.prize_spread, 0.1);

  // The Omega system maximizes -W prod(1 - q_i F(c_i)) - sum c_i F(c_i).
  const int grid = 400;
  double best = -1e300, b1 = 0, b2 = 0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double c1 = double(i) / grid, c2 = double(j) / grid;
      const double v = -W * (1 - 0.9 * c1) * (1 - 0.5 * c2) - c1 * c1 - c2 * c2;
      if (v > best) {
        best = v;
        b1 = c1;
        b2 = c2;
      }
    }
  }
  EXPECT_NEAR(r.thresholds.c[0], b1, 2.0 / grid);
  EXPECT_NEAR(r.thresholds.c[1], b2, 2.0 / grid);
}

TEST(SolvePrincipalHetero, ConstrainedPrizeIsBestSinglePrize) {
  const cs::HeteroContest h(kUniform, {0.9, 0.6, 0.3}, 1);
  const double W = 2;
  const auto r = cs::solve_principal_hetero(h, W);
  EXPECT_TRUE(r.constrained_thresholds.converged);
  EXPECT_NEAR(r.constrained_value, cs::hetero_principal_value(h, W, r.constrained_prize), 1e-12);
  for (double V = 0.05; V < W; V += 0.05) {
    EXPECT_LE(cs::hetero_principal_value(h, W, V), r.constrained_value + 1e-12) << V;
  }
}

TEST(BestResponseScan, ContinuumOnKinkedCdf) {
  const auto set = cs::best_response_scan_n2(kinked_cdf(), 1, 5.0 / 7.0, 10000);
  ASSERT_EQ(set.segments.size(), 1u);
  const auto& seg = set.segments.front();
  EXPECT_NEAR(seg.c1_lower, 3.0 / 7.0, 2e-4);
  EXPECT_NEAR(seg.c1_upper, 4.0 / 7.0, 2e-4);
  EXPECT_GT(seg.grid_points, 1000u);
  EXPECT_TRUE(set.contains(0.5, 0.5, 1e-9));
  for (const auto& [c1, c2] : set.pairs) EXPECT_NEAR(c1 + c2, 1.0, 1e-9);
}

TEST(BestResponseScan, UniqueSymmetricPairForUniform) {
  const auto set = cs::best_response_scan_n2(kUniform, 0.5, 1, 1000);
  ASSERT_EQ(set.pairs.size(), 1u);
  const double c = cs::solve_threshold(kUniform, {2, 0.5, 1}).threshold;
  EXPECT_NEAR(set.pairs[0].first, c, 1e-10);
  EXPECT_NEAR(set.pairs[0].second, c, 1e-10);
}

TEST(BestResponseScan, NoInteriorPairWithoutSearch) {
  const auto set = cs::best_response_scan_n2(kShifted, 0.5, 0.5, 1000);
  EXPECT_TRUE(set.pairs.empty());
  EXPECT_TRUE(set.segments.empty());
}

}  // namespace
