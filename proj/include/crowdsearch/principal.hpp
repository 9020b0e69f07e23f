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

// The principal's prize choice, recast as a choice of equilibrium threshold.
//
// Maximizing (W - V) P*(V) over V is equivalent to maximizing
//   Wobj(c) = -W (1 - qF(c))^n - n c F(c)
// over thresholds c; the prize that implements c is V = c / Phi(c). Interior
// optima are fixed points of
//   Omega(c) = W q (1 - qF(c))^{n-1} - F(c) / f(c),
// which is strictly decreasing when F/f is non-decreasing.

#ifndef CROWDSEARCH_PRINCIPAL_HPP_
#define CROWDSEARCH_PRINCIPAL_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"

namespace crowdsearch {

struct PrincipalConfig {
  double W = 1.0;
  double n = 1.0;
  double q = 1.0;

  void validate() const {
    detail::require(std::isfinite(W) && W > 0.0, "principal: W must be > 0");
    detail::require(std::isfinite(n) && n >= 1.0, "principal: n must be >= 1");
    detail::require(q > 0.0 && q <= 1.0, "principal: q must lie in (0, 1]");
  }
};

enum class PrizeRegime { kInterior, kLowerBoundary, kUpperBoundary };

inline std::string_view to_string(PrizeRegime r) {
  switch (r) {
    case PrizeRegime::kInterior:
      return "interior";
    case PrizeRegime::kLowerBoundary:
      return "lower-boundary";
    case PrizeRegime::kUpperBoundary:
      return "upper-boundary";
  }
  return "unknown";
}

struct WBounds {
  double lower = 0.0;                                     // W at or below: no search
  double upper = std::numeric_limits<double>::infinity();  // W at or above: everyone searches
};

struct PrizeSolution {
  double threshold = 0.0;  // optimal equilibrium threshold
  double prize = 0.0;      // V* = threshold / Phi(threshold)
  PrizeRegime regime = PrizeRegime::kInterior;
  double objective_value = 0.0;
  bool certified = true;  // false when F/f failed the monotonicity check
  WBounds bounds;
};

inline double principal_objective(const CostDistribution& d, const PrincipalConfig& cfg,
                                  double c_hat) {
  detail::require_threshold(d, c_hat);
  const double F = d.cdf(c_hat);
  return -cfg.W * pow_one_minus(cfg.q * F, cfg.n) - cfg.n * c_hat * F;
}

inline double omega(const CostDistribution& d, const PrincipalConfig& cfg, double c_hat) {
  detail::require_threshold(d, c_hat);
  const double F = d.cdf(c_hat);
  const double benefit = cfg.W * cfg.q * pow_one_minus(cfg.q * F, cfg.n - 1.0);
  if (!(F > 0.0)) return benefit;
  return benefit - d.reverse_hazard_ratio(c_hat);
}

inline WBounds w_bounds(const CostDistribution& d, double q, double n) {
  detail::require(q > 0.0 && q <= 1.0, "w_bounds: q must lie in (0, 1]");
  WBounds b;
  b.lower = d.lower() / q;
  const double f_top = d.pdf(d.upper());
  const double denom = q * pow_one_minus(q, n - 1.0);
  if (denom > 0.0 && f_top > 0.0) b.upper = (d.upper() + 1.0 / f_top) / denom;
  return b;
}

namespace detail {

inline PrizeSolution finish_prize(const CostDistribution& d, const PrincipalConfig& cfg,
                                  double c, PrizeRegime regime) {
  PrizeSolution s;
  s.threshold = c;
  s.regime = regime;
  s.prize = c / phi_from_cdf(d.cdf(c), cfg.q, cfg.n);
  s.objective_value = principal_objective(d, cfg, c);
  return s;
}

}  // namespace detail

inline PrizeSolution optimal_prize(const CostDistribution& d, const PrincipalConfig& cfg,
                                   double tol = kDefaultTolerance) {
  cfg.validate();
  const WBounds bounds = w_bounds(d, cfg.q, cfg.n);
  PrizeSolution s;
  if (!check_assumption4(d, 200).passed) {
    // Global search on the objective; the smallest maximizer wins ties.
    auto obj = [&](double c) { return principal_objective(d, cfg, c); };
    const GridMaximum m = refine_maximum(obj, d.lower(), d.upper(), 20001);
    PrizeRegime regime = PrizeRegime::kInterior;
    if (m.argmax <= d.lower()) regime = PrizeRegime::kLowerBoundary;
    if (m.argmax >= d.upper()) regime = PrizeRegime::kUpperBoundary;
    s = detail::finish_prize(d, cfg, m.argmax, regime);
    s.certified = false;
  } else if (cfg.W <= bounds.lower) {
    s = detail::finish_prize(d, cfg, d.lower(), PrizeRegime::kLowerBoundary);
  } else if (cfg.W >= bounds.upper) {
    s = detail::finish_prize(d, cfg, d.upper(), PrizeRegime::kUpperBoundary);
  } else {
    auto gap = [&](double c) { return omega(d, cfg, c) - c; };
    const RootResult root = bisect(gap, d.lower(), d.upper(), tol, 400, tol);
    s = detail::finish_prize(d, cfg, root.root, PrizeRegime::kInterior);
  }
  s.bounds = bounds;
  return s;
}

struct GridVerification {
  double grid_argmax = 0.0;
  double solver_threshold = 0.0;
  double spacing = 0.0;
  bool passed = false;
};

// Brute-force oracle: maximizes the objective on `grid_size` equal cells and
// checks the solver's threshold lies within two cells of the grid argmax.
inline GridVerification verify_against_grid(const CostDistribution& d,
                                            const PrincipalConfig& cfg,
                                            std::size_t grid_size) {
  detail::require(grid_size >= 100, "verify_against_grid: grid_size must be >= 100");
  GridVerification v;
  v.spacing = (d.upper() - d.lower()) / static_cast<double>(grid_size);
  auto obj = [&](double c) { return principal_objective(d, cfg, c); };
  v.grid_argmax = grid_maximize(obj, d.lower(), d.upper(), grid_size + 1).argmax;
  v.solver_threshold = optimal_prize(d, cfg).threshold;
  v.passed = std::abs(v.grid_argmax - v.solver_threshold) <= 2.0 * v.spacing;
  return v;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_PRINCIPAL_HPP_
