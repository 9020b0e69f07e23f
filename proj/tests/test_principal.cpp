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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "crowdsearch/montecarlo.hpp"
#include "crowdsearch/principal.hpp"
#include "oracles.hpp"
#include "random_configs.hpp"

namespace cs = crowdsearch;

namespace {

const auto kUniform = cs::CostDistribution::uniform(0, 1);
const auto kShifted = cs::CostDistribution::uniform(0.25, 1.25);

TEST(Objective, Examples) {
  EXPECT_EQ(cs::principal_objective(kShifted, {3, 4, 0.5}, 0.25), -3.0);
  EXPECT_NEAR(cs::principal_objective(kUniform, {3, 4, 1}, 1.0), -4.0, 1e-15);
  EXPECT_NEAR(cs::principal_objective(kUniform, {2, 2, 1}, 0.5), -1.0, 1e-15);
  EXPECT_THROW(cs::principal_objective(kUniform, {2, 2, 1}, 1.5), cs::ValidationError);
}

TEST(Omega, Examples) {
  EXPECT_EQ(cs::omega(kShifted, {3, 4, 0.5}, 0.25), 1.5);
  EXPECT_NEAR(cs::omega(kUniform, {2, 2, 1}, 0.5), 0.5, 1e-15);
  // At the top F = 1, so the ratio term is 1 / f.
  EXPECT_NEAR(cs::omega(kUniform, {4, 3, 0.5}, 1.0), 4 * 0.5 * 0.25 - 1.0, 1e-15);
}

TEST(WBounds, Examples) {
  const auto a = cs::w_bounds(kUniform, 0.5, 2);
  EXPECT_EQ(a.lower, 0.0);
  EXPECT_NEAR(a.upper, 8.0, 1e-14);
  EXPECT_EQ(cs::w_bounds(kShifted, 0.5, 2).lower, 0.5);
  EXPECT_TRUE(std::isinf(cs::w_bounds(kUniform, 1.0, 2).upper));
}

TEST(OptimalPrize, LowerBoundary) {
  for (double W : {0.1, 0.3, 0.5}) {
    const auto s = cs::optimal_prize(kShifted, {W, 3, 0.5});
    EXPECT_EQ(s.regime, cs::PrizeRegime::kLowerBoundary);
    EXPECT_EQ(s.threshold, 0.25);
    EXPECT_NEAR(s.prize, 0.25 / 0.5, 1e-15);
  }
  // With lower = 0 there is no lower regime, but the threshold vanishes with W.
  double prev = 1.0;
  for (double W : {1e-1, 1e-3, 1e-6}) {
    const auto s = cs::optimal_prize(kUniform, {W, 2, 0.5});
    EXPECT_EQ(s.regime, cs::PrizeRegime::kInterior);
    EXPECT_LT(s.threshold, prev);
    prev = s.threshold;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(OptimalPrize, UpperBoundary) {
  const auto s = cs::optimal_prize(kUniform, {10, 2, 0.5});
  EXPECT_EQ(s.regime, cs::PrizeRegime::kUpperBoundary);
  EXPECT_EQ(s.threshold, 1.0);
  EXPECT_NEAR(s.prize, 8.0 / 3.0, 1e-14);
}

TEST(OptimalPrize, UniformInteriorClosedForm) {
  // 2 (1 - c/2) - c = c  gives  c = 2/3, and Phi(2/3) = 5/12.
  const auto s = cs::optimal_prize(kUniform, {4, 2, 0.5});
  EXPECT_EQ(s.regime, cs::PrizeRegime::kInterior);
  EXPECT_NEAR(s.threshold, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.prize, 1.6, 1e-11);
  EXPECT_TRUE(s.certified);
  EXPECT_NEAR(cs::omega(kUniform, {4, 2, 0.5}, s.threshold), s.threshold, 1e-12);
}

TEST(OptimalPrize, FlagsFailedMonotonicity) {
  const auto d = cs::CostDistribution::piecewise_linear({{0, 0}, {3.0 / 7, 0.4}, {4.0 / 7, 0.8}, {1, 1}});
  const auto s = cs::optimal_prize(d, {1.5, 2, 1});
  EXPECT_FALSE(s.certified);
  // Still the maximizer of the objective on a fine grid.
  const auto v = cs::verify_against_grid(d, {1.5, 2, 1}, 10000);
  EXPECT_TRUE(v.passed) << v.grid_argmax << " vs " << v.solver_threshold;
}

TEST(VerifyAgainstGrid, Examples) {
  const auto mid = cs::verify_against_grid(kUniform, {4, 2, 0.5}, 10000);
  EXPECT_TRUE(mid.passed);
  EXPECT_NEAR(mid.grid_argmax, 2.0 / 3.0, 2e-4);
  const auto low = cs::verify_against_grid(kShifted, {0.4, 3, 0.5}, 1000);
  EXPECT_TRUE(low.passed);
  EXPECT_EQ(low.grid_argmax, 0.25);
  const auto high = cs::verify_against_grid(kUniform, {10, 2, 0.5}, 1000);
  EXPECT_TRUE(high.passed);
  EXPECT_EQ(high.grid_argmax, 1.0);
  EXPECT_THROW(cs::verify_against_grid(kUniform, {4, 2, 0.5}, 50), cs::ValidationError);
}

TEST(OptimalPrize, ArgmaxMatchesDirectPrizeSearch) {
  // Maximize (W - V) P(c*(V)) over V directly and compare with V*.
  for (const auto& [d, W, n, q] : std::vector<std::tuple<cs::CostDistribution, double, double, double>>{
           {kUniform, 4, 2, 0.5}, {kShifted, 3, 5, 0.6}, {cs::CostDistribution::power(2), 2, 4, 0.8}}) {
    const auto s = cs::optimal_prize(d, {W, n, q});
    auto payoff = [&](double V) { return (W - V) * cs::solve_threshold(d, {n, q, V}).success_prob; };
    const auto best = cs::refine_maximum(payoff, 1e-6, W, 2001, 1e-12);
    EXPECT_NEAR(best.argmax, s.prize, 1e-5 * W) << cs::to_string(d.kind());
  }
}

TEST(PrincipalProperties, OmegaDecreasingWhenRatioMonotone) {
  auto g = oracle::rng(21);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    const auto d = oracle::random_distribution(g);
    if (!cs::check_assumption4(d, 200).passed) continue;
    ++checked;
    const cs::PrincipalConfig cfg{oracle::uniform(g, 0.5, 5), std::floor(oracle::uniform(g, 1, 20)),
                                  oracle::uniform(g, 0.1, 1)};
    double prev = cs::omega(d, cfg, d.lower() + 1e-6 * (d.upper() - d.lower()));
    for (int k = 1; k <= 100; ++k) {
      const double c = k == 100 ? d.upper() : d.lower() + (d.upper() - d.lower()) * k / 100.0;
      const double w = cs::omega(d, cfg, c);
      EXPECT_LT(w, prev) << cs::to_string(d.kind()) << " c=" << c;
      prev = w;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(PrincipalProperties, ThresholdNondecreasingInValuation) {
  auto g = oracle::rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = oracle::random_distribution(g);
    if (!cs::check_assumption4(d, 200).passed) continue;
    const double n = std::floor(oracle::uniform(g, 1, 20));
    const double q = oracle::uniform(g, 0.1, 0.95);
    double prev = d.lower();
    for (double W = 0.05; W < 20; W *= 1.3) {
      const double c = cs::optimal_prize(d, {W, n, q}).threshold;
      EXPECT_GE(c, prev - 1e-12) << "W=" << W;
      prev = c;
    }
  }
}

TEST(PrincipalProperties, PrizeReproducesThreshold) {
  auto g = oracle::rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::random_distribution(g);
    if (!cs::check_assumption4(d, 200).passed) continue;
    const cs::PrincipalConfig cfg{oracle::uniform(g, 0.5, 5), std::floor(oracle::uniform(g, 1, 30)),
                                  oracle::uniform(g, 0.1, 0.95)};
    const auto s = cs::optimal_prize(d, cfg);
    if (s.regime != cs::PrizeRegime::kInterior) continue;
    EXPECT_GT(s.prize, 0.0);
    EXPECT_NEAR(cs::solve_threshold(d, {cfg.n, cfg.q, s.prize}).threshold, s.threshold, 1e-8);
    EXPECT_NEAR(cs::omega(d, cfg, s.threshold), s.threshold, 1e-9);
  }
}

TEST(PrincipalProperties, SimulatedPayoffIsLocallyOptimal) {
  const cs::PrincipalConfig cfg{4, 2, 0.5};
  const double v_star = cs::optimal_prize(kUniform, cfg).prize;
  cs::SimConfig sim;
  sim.replications = 1000000;
  sim.seed = 99;
  auto payoff = [&](double V) {
    const auto e = cs::simulate(kUniform, {cfg.n, cfg.q, V}, sim);
    return cs::Estimate{(cfg.W - V) * e.success_rate.value, (cfg.W - V) * e.success_rate.std_error};
  };
  const auto at_star = payoff(v_star);
  for (double scale : {0.9, 1.1}) {
    const auto other = payoff(v_star * scale);
    const double se = std::hypot(at_star.std_error, other.std_error);
    EXPECT_GE(at_star.value, other.value - 3 * se) << scale;
  }
}

}  // namespace
