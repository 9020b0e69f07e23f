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

// A non-strategic expert who always searches and finds the object with
// probability q_e.
//
// Conditioning on whether the expert finds the object, a searcher's win
// probability is
//   PhiE(c) = (1 - q_e) Phi(c) + q_e PhiTilde(c),
//   PhiTilde(c) = 1/(nF) + ((1 - qF)^{n+1} - 1) / (n (n+1) q F^2),
// with PhiE(lower) = q (1 - q_e / 2). If the expert keeps the prize whenever
// it finds the object, the searcher's win probability is (1 - q_e) Phi(c).

#ifndef CROWDSEARCH_EXPERT_HPP_
#define CROWDSEARCH_EXPERT_HPP_

#include <cmath>
#include <string_view>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"

namespace crowdsearch {

enum class RewardMode { kShared, kExpertKeeps };

inline std::string_view to_string(RewardMode m) {
  return m == RewardMode::kShared ? "shared" : "expert-keeps";
}

struct ExpertConfig {
  double q_e = 0.5;
  RewardMode mode = RewardMode::kShared;

  void validate() const {
    detail::require(q_e > 0.0 && q_e <= 1.0, "expert: q_e must lie in (0, 1]");
  }
};

struct ExpertEquilibrium {
  double threshold = 0.0;       // c^e
  double win_prob = 0.0;        // searcher's win probability at c^e
  double crowd_success = 0.0;   // P(c^e, q, n): the crowd alone finds it
  double success_prob = 0.0;    // (1 - q_e) P(c^e) + q_e
  double expected_searchers = 0.0;
  bool interior = false;
  double residual = 0.0;
};

namespace detail {

// PhiTilde = q A(x) / (n (n+1)),  A(x) = ((1-x)^{m} - 1 + m x) / x^2,  m = n+1,
// x = qF. A is summed as a binomial series when m x is small.
inline double phi_tilde_from_cdf(double F, double q, double n) {
  if (!(F > 0.0)) return q / 2.0;
  const double x = q * F;
  const double m = n + 1.0;
  double a = 0.0;
  if (m * x < 0.1) {
    double coef = m * (m - 1.0) / 2.0;  // C(m, 2)
    double xp = 1.0;
    for (int k = 2; k < 22; ++k) {
      a += ((k % 2 == 0) ? coef : -coef) * xp;
      coef *= (m - k) / (k + 1.0);
      xp *= x;
    }
  } else {
    a = (std::expm1(m * std::log1p(-x)) + m * x) / (x * x);
    if (x >= 1.0) a = (m * x - 1.0) / (x * x);
  }
  return q * a / (n * m);
}

inline double phi_expert_from_cdf(double F, double q, double q_e, double n) {
  return (1.0 - q_e) * phi_from_cdf(F, q, n) + q_e * phi_tilde_from_cdf(F, q, n);
}

inline double expert_reward_rate(double F, double q, const ExpertConfig& ex, double n) {
  if (ex.mode == RewardMode::kExpertKeeps) return (1.0 - ex.q_e) * phi_from_cdf(F, q, n);
  return phi_expert_from_cdf(F, q, ex.q_e, n);
}

}  // namespace detail

/// PhiTilde: a searcher's win probability given that the expert found it.
inline double phi_tilde(const CostDistribution& d, double q, double n, double c_hat) {
  detail::require_threshold(d, c_hat);
  return detail::phi_tilde_from_cdf(d.cdf(c_hat), q, n);
}

inline double phi_expert(const CostDistribution& d, double q, double q_e, double n,
                         double c_hat) {
  detail::require_threshold(d, c_hat);
  detail::require(q_e >= 0.0 && q_e <= 1.0, "phi_expert: q_e must lie in [0, 1]");
  return detail::phi_expert_from_cdf(d.cdf(c_hat), q, q_e, n);
}

inline ExpertEquilibrium solve_threshold_expert(const CostDistribution& d,
                                                const ContestConfig& cfg,
                                                const ExpertConfig& ex,
                                                double tol = kDefaultTolerance) {
  cfg.validate();
  ex.validate();
  auto reward = [&](double c) { return cfg.V * detail::expert_reward_rate(d.cdf(c), cfg.q, ex, cfg.n); };
  double c = 0.0;
  bool interior = false;
  if (!(d.lower() < reward(d.lower()))) {
    c = d.lower();
  } else if (!(reward(d.upper()) < d.upper())) {
    c = d.upper();
  } else {
    c = bisect([&](double x) { return x - reward(x); }, d.lower(), d.upper(), tol, 400, tol).root;
    interior = true;
  }
  ExpertEquilibrium out;
  out.threshold = c;
  out.interior = interior;
  const double F = d.cdf(c);
  out.win_prob = reward(c) / cfg.V;
  out.residual = std::abs(c - reward(c));
  out.crowd_success = one_minus_pow_one_minus(cfg.q * F, cfg.n);
  out.success_prob = (1.0 - ex.q_e) * out.crowd_success + ex.q_e;
  out.expected_searchers = cfg.n * F;
  return out;
}

/// Expertise at which the expert displaces exactly one strategic agent:
/// q F(c*(n + 1)).
inline double critical_expertise(const CostDistribution& d, const ContestConfig& cfg) {
  cfg.validate();
  ContestConfig bigger = cfg;
  bigger.n += 1.0;
  const EquilibriumResult r = solve_threshold(d, bigger);
  if (!r.interior) {
    throw ValidationError("critical_expertise: the (n+1)-agent equilibrium is not interior");
  }
  return cfg.q * d.cdf(r.threshold);
}

inline double success_probability_expert(const CostDistribution& d, const ContestConfig& cfg,
                                         const ExpertConfig& ex) {
  return solve_threshold_expert(d, cfg, ex).success_prob;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_EXPERT_HPP_
