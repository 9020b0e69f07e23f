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

#include "crowdsearch/montecarlo.hpp"
#include "crowdsearch/multiprize.hpp"
#include "oracles.hpp"
#include "random_configs.hpp"

namespace cs = crowdsearch;

namespace {

const auto kUniform = cs::CostDistribution::uniform(0, 1);
const auto kShifted = cs::CostDistribution::uniform(0.25, 1.25);

// A random monotone structure of total V: sorted uniform weights.
cs::PrizeStructure random_structure(std::mt19937_64& g, int n, double V) {
  std::vector<double> w(n);
  for (double& x : w) x = oracle::uniform(g, 0, 1);
  std::sort(w.rbegin(), w.rend());
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x *= V / s;
  return cs::PrizeStructure(w, V);
}

TEST(PrizeStructure, Validation) {
  EXPECT_NO_THROW(cs::PrizeStructure({0.5, 0.3, 0.2}, 1.0));
  EXPECT_THROW(cs::PrizeStructure({0.3, 0.5, 0.2}, 1.0), cs::ValidationError);
  EXPECT_THROW(cs::PrizeStructure({1.2, -0.2}, 1.0), cs::ValidationError);
  EXPECT_THROW(cs::PrizeStructure({0.5, 0.3}, 1.0), cs::ValidationError);
  EXPECT_THROW(cs::PrizeStructure(std::vector<double>{}), cs::ValidationError);
  const auto wta = cs::PrizeStructure::winner_takes_all(2.0, 3);
  EXPECT_EQ(wta.values(), (std::vector<double>{2.0, 0.0, 0.0}));
  const auto eq = cs::PrizeStructure::equal_split(3.0, 3);
  EXPECT_EQ(eq.values(), (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_EQ(eq.total(), 3.0);
}

TEST(PM, Examples) {
  EXPECT_NEAR(cs::p_m(kUniform, 0.4, 5, 1, 0.7), cs::success_probability(kUniform, {5, 0.4, 1}, 0.7),
              1e-15);
  EXPECT_NEAR(cs::p_m(kUniform, 1, 4, 4, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(cs::p_m(kUniform, 1, 2, 2, 0.5), 0.25, 1e-15);
  EXPECT_THROW(cs::p_m(kUniform, 1, 2, 3, 0.5), cs::ValidationError);
  EXPECT_THROW(cs::p_m(kUniform, 1, 2, 0, 0.5), cs::ValidationError);
}

TEST(PM, MatchesFinderCountTailAndIsNonincreasing) {
  auto g = oracle::rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 120));
    const double q = oracle::uniform(g, 0.01, 1);
    const double F = oracle::uniform(g, 0, 1);
    const auto pm = cs::p_m_all_from_cdf(F, q, n);
    for (int m = 1; m <= n; ++m) {
      EXPECT_NEAR(pm[m - 1], oracle::at_least_m_finders(F, q, n, m), 1e-12) << n << " " << m;
      if (m > 1) {
        EXPECT_LE(pm[m - 1], pm[m - 2] + 1e-15);
      }
    }
  }
}

TEST(PhiM, Examples) {
  for (double c : {0.2, 0.6, 1.0}) {
    EXPECT_NEAR(cs::phi_m(kUniform, 0.7, 5, 1, c), cs::phi(kUniform, {5, 0.7, 1}, c), 1e-14);
    EXPECT_NEAR(cs::phi_m(kUniform, 0.7, 2, 2, c), 0.49 * c / 2, 1e-15);
  }
  EXPECT_EQ(cs::phi_m(kShifted, 0.7, 3, 1, 0.25), 0.7);
  EXPECT_EQ(cs::phi_m(kShifted, 0.7, 3, 2, 0.25), 0.0);
}

TEST(PhiM, RatioDirectAndOracleAgree) {
  auto g = oracle::rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 10));
    const double q = oracle::uniform(g, 0.01, 1);
    const double c = oracle::uniform(g, 0.001, 1);
    const double F = kUniform.cdf(c);
    double sum = 0;
    for (int m = 1; m <= n; ++m) {
      const double ratio = cs::phi_m(kUniform, q, n, m, c);
      EXPECT_NEAR(ratio, cs::phi_m_direct(kUniform, q, n, m, c), 1e-12);
      EXPECT_NEAR(ratio, oracle::phi_rank(F, q, n, m), 1e-12);
      sum += ratio;
    }
    EXPECT_NEAR(sum, q, 1e-12);
  }
}

TEST(PhiM, StrictlyDecreasingInRank) {
  auto g = oracle::rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(oracle::uniform(g, 0, 9));
    const double q = oracle::uniform(g, 0.05, 1);
    const double c = oracle::uniform(g, 0.01, 1);
    const auto phis = cs::phi_m_all_from_cdf(c, q, n);
    for (int m = 1; m < n; ++m) EXPECT_GT(phis[m - 1], phis[m]) << n << " " << m;
  }
}

TEST(PhiM, AggregateRewardBounds) {
  auto g = oracle::rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 10));
    const double q = oracle::uniform(g, 0.05, 1);
    const double V = oracle::uniform(g, 0.2, 3);
    const double F = oracle::uniform(g, 0, 1);
    const auto v = random_structure(g, n, V);
    const double r = cs::aggregate_reward(v, F, q);
    EXPECT_LE(r, V * cs::phi_m_all_from_cdf(F, q, n)[0] + 1e-12);
    EXPECT_GE(r, V * q / n - 1e-12);
  }
}

TEST(SolveThresholdMulti, Examples) {
  const auto wta = cs::solve_threshold_multi(kUniform, 0.6, cs::PrizeStructure::winner_takes_all(1, 4));
  EXPECT_NEAR(wta.threshold, cs::solve_threshold(kUniform, {4, 0.6, 1}).threshold, 1e-11);
  const auto eq = cs::solve_threshold_multi(kUniform, 0.6, cs::PrizeStructure::equal_split(1, 4));
  EXPECT_NEAR(eq.threshold, 0.15, 1e-11);
  const auto ex3 = cs::solve_threshold_multi(kUniform, 1, cs::PrizeStructure({0.75, 0.25}, 1));
  EXPECT_TRUE(ex3.interior);
  EXPECT_NEAR(ex3.threshold, 0.6, 1e-11);
  EXPECT_EQ(ex3.roots.size(), 1u);
  EXPECT_LE(ex3.residual, cs::kDefaultTolerance);
}

TEST(SolveThresholdMulti, BetweenEqualSplitAndWinnerTakesAll) {
  auto g = oracle::rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(oracle::uniform(g, 0, 10));
    const double q = oracle::uniform(g, 0.1, 1);
    const double V = oracle::uniform(g, 0.2, 1.5);
    const auto v = random_structure(g, n, V);
    const auto r = cs::solve_threshold_multi(kUniform, q, v);
    const double top = cs::solve_threshold(kUniform, {double(n), q, V}).threshold;
    EXPECT_LE(r.threshold, top + 1e-10);
    EXPECT_GE(r.threshold, std::min(1.0, V * q / n) - 1e-10);
    if (r.interior) {
      EXPECT_LE(r.residual, cs::kDefaultTolerance);
    }
  }
}

TEST(PrincipalValueMulti, ExampleThree) {
  EXPECT_NEAR(cs::principal_value_multi(kUniform, 1, 2, cs::PrizeStructure({1.0, 0.0}, 1)), 8.0 / 9.0,
              1e-9);
  EXPECT_NEAR(cs::principal_value_multi(kUniform, 1, 2, cs::PrizeStructure({0.75, 0.25}, 1)),
              24.0 / 25.0, 1e-9);
  // No search when qV is at the bottom of the support: nothing found, nothing paid.
  EXPECT_EQ(cs::principal_value_multi(kShifted, 0.5, 0.5, cs::PrizeStructure({0.3, 0.2}, 0.5)), 0.0);
}

TEST(AchievableSet, Examples) {
  const auto one = cs::achievable_set(kUniform, 0.6, 1, 1);
  EXPECT_NEAR(one.lower, 0.6, 1e-15);
  EXPECT_NEAR(one.upper, 0.6, 1e-12);
  const auto two = cs::achievable_set(kUniform, 1, 2, 1);
  EXPECT_EQ(two.lower, 0.5);
  EXPECT_NEAR(two.upper, 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(two.contains(0.6));
  EXPECT_FALSE(two.contains(0.7));
}

TEST(OptimalPrizeStructure, ExampleThree) {
  const auto s = cs::optimal_prize_structure(kUniform, 1, 2, 2, 1);
  EXPECT_GE(s.value, 24.0 / 25.0 - 1e-9);
  EXPECT_GT(s.value, 8.0 / 9.0);
  EXPECT_NEAR(s.value, cs::principal_value_multi(kUniform, 1, 2, s.structure), 1e-9);
}

TEST(OptimalPrizeStructure, ExtremeValuations) {
  const auto low = cs::optimal_prize_structure(kUniform, 0.8, 3, 0.3, 1);
  EXPECT_EQ(low.regime, cs::StructureRegime::kEqualSplit);
  for (int m = 0; m < 3; ++m) EXPECT_NEAR(low.structure[m], 1.0 / 3.0, 1e-15);
  EXPECT_LE(0.3, low.w_lower);
  const auto high = cs::optimal_prize_structure(kUniform, 0.8, 3, 50, 1);
  EXPECT_EQ(high.regime, cs::StructureRegime::kWinnerTakesAll);
  EXPECT_EQ(high.structure.values(), (std::vector<double>{1, 0, 0}));
  EXPECT_GE(50.0, high.w_upper);
}

TEST(OptimalPrizeStructure, InteriorStructureImplementsTarget) {
  const double q = 0.8;
  const int n = 3;
  const double V = 1;
  const auto probe = cs::optimal_prize_structure(kUniform, q, n, 1, V);
  const double W = 0.5 * (probe.w_lower + probe.w_upper);
  const auto s = cs::optimal_prize_structure(kUniform, q, n, W, V);
  EXPECT_EQ(s.regime, cs::StructureRegime::kInterior);
  EXPECT_GT(s.lambda, 0.0);
  EXPECT_LT(s.lambda, 1.0);
  EXPECT_NEAR(s.threshold, s.unconstrained_threshold, 1e-12);
  EXPECT_NEAR(cs::solve_threshold_multi(kUniform, q, s.structure).threshold, s.threshold, 1e-9);
}

TEST(OptimalPrizeStructure, BeatsRandomStructures) {
  auto g = oracle::rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = oracle::random_distribution(g);
    if (!cs::check_assumption4(d, 200).passed) continue;
    const int n = 2 + static_cast<int>(oracle::uniform(g, 0, 6));
    const double q = oracle::uniform(g, 0.2, 1);
    const double V = d.lower() + oracle::uniform(g, 0.5, 2) * (d.upper() - d.lower());
    const double W = V * oracle::uniform(g, 1.1, 6);
    const auto best = cs::optimal_prize_structure(d, q, n, W, V);
    EXPECT_NEAR(best.value, cs::principal_value_multi(d, q, W, best.structure), 1e-9);
    for (int k = 0; k < 20; ++k) {
      const auto v = random_structure(g, n, V);
      EXPECT_LE(cs::principal_value_multi(d, q, W, v), best.value + 1e-9);
    }
  }
}

TEST(MultiprizeSimulation, RankFrequenciesMatchPhiM) {
  const cs::ContestConfig cfg{4, 0.8, 1};
  const cs::PrizeStructure v({0.5, 0.3, 0.2, 0.0}, 1);
  cs::SimConfig sim;
  sim.replications = 400000;
  sim.seed = 17;
  sim.variant = cs::SimVariant::kMultiprize;
  sim.prizes = v.values();
  const auto est = cs::simulate(kUniform, cfg, sim);
  const double c = cs::solve_threshold_multi(kUniform, cfg.q, v).threshold;
  EXPECT_NEAR(est.thresholds[0], c, 1e-15);
  for (int m = 1; m <= 4; ++m) {
    const auto& r = est.rank_win_rates[m - 1];
    EXPECT_NEAR(r.value, cs::phi_m(kUniform, cfg.q, 4, m, c), 3 * r.std_error) << m;
  }
  // Each agent's row of the rank matrix sums to q.
  for (const auto& row : est.rank_matrix) {
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), cfg.q, 0.01);
  }
}

}  // namespace
