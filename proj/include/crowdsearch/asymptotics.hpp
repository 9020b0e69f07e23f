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

// Large-crowd limits.
//
// As n grows the equilibrium threshold falls to the bottom of the support.
// With lower > 0 the expected number of searchers n F(c_n) converges to the
// root kappa of  lower = V (1 - e^{-q kappa}) / kappa,  and the success
// probability to 1 - e^{-q kappa}. With lower = 0 both diverge / reach 1.

#ifndef CROWDSEARCH_ASYMPTOTICS_HPP_
#define CROWDSEARCH_ASYMPTOTICS_HPP_

#include <cmath>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"

namespace crowdsearch {

enum class LimitRegime { kLowerBoundZero, kLowerBoundPositive };

inline std::string_view to_string(LimitRegime r) {
  return r == LimitRegime::kLowerBoundZero ? "lower-bound-zero" : "lower-bound-positive";
}

struct LimitResult {
  double kappa = std::numeric_limits<double>::infinity();
  double p_infinity = 1.0;
  LimitRegime regime = LimitRegime::kLowerBoundZero;
};

namespace detail {

inline void require_limit_inputs(double c_lo, double q, double V) {
  require(std::isfinite(c_lo) && c_lo >= 0.0, "limit: lower bound must be >= 0");
  require(q > 0.0 && q <= 1.0, "limit: q must lie in (0, 1]");
  require(std::isfinite(V) && V > 0.0, "limit: V must be > 0");
}

}  // namespace detail

inline double solve_kappa(double c_lo, double q, double V) {
  detail::require_limit_inputs(c_lo, q, V);
  detail::require(c_lo > 0.0, "solve_kappa: lower bound must be > 0");
  detail::require(c_lo < q * V, "solve_kappa: no positive root unless lower < qV");
  // V (1 - e^{-q k}) / k falls strictly from qV (k -> 0) to 0.
  auto excess = [&](double k) { return V * (-std::expm1(-q * k)) / k - c_lo; };
  constexpr double kLo = 1e-12;
  const double hi = V / c_lo + 1.0;
  if (excess(kLo) <= 0.0) {
    return std::max(kLo * 1e-3, 2.0 * (q * V - c_lo) / (q * q * V));
  }
  return bisect(excess, kLo, hi, 1e-15 * hi, 2000).root;
}

inline double p_infinity(double c_lo, double q, double V) {
  detail::require_limit_inputs(c_lo, q, V);
  if (c_lo == 0.0) return 1.0;
  return -std::expm1(-q * solve_kappa(c_lo, q, V));
}

inline LimitResult large_contest_limit(double c_lo, double q, double V) {
  detail::require_limit_inputs(c_lo, q, V);
  LimitResult out;
  if (c_lo == 0.0) return out;
  out.regime = LimitRegime::kLowerBoundPositive;
  out.kappa = solve_kappa(c_lo, q, V);
  out.p_infinity = -std::expm1(-q * out.kappa);
  return out;
}

enum class RateQuantity {
  kCFProduct,  // c_n F(c_n)
  kFAlone,     // F(c_n)
  kCGap,       // c_n - lower
};

inline std::string_view to_string(RateQuantity q) {
  switch (q) {
    case RateQuantity::kCFProduct:
      return "cF_product";
    case RateQuantity::kFAlone:
      return "F_alone";
    case RateQuantity::kCGap:
      return "c_gap";
  }
  return "unknown";
}

struct RateEstimate {
  RateQuantity quantity = RateQuantity::kCGap;
  LinearFit fit;  // log(quantity) against log(n)
  std::vector<double> n_values;
  std::vector<double> quantity_values;
};

// Fits the power-law exponent of a large-n quantity by least squares on
// log-log pairs. n_grid is usually geometric, e.g. 1e2 ... 1e6.
inline RateEstimate estimate_rate(const CostDistribution& d, double q, double V,
                                  std::span<const double> n_grid, RateQuantity quantity) {
  detail::require(n_grid.size() >= 3, "estimate_rate: need at least three grid points");
  RateEstimate out;
  out.quantity = quantity;
  std::vector<double> log_n, log_y;
  for (double n : n_grid) {
    const EquilibriumResult r = solve_threshold(d, {n, q, V});
    const double F = d.cdf(r.threshold);
    double y = 0.0;
    switch (quantity) {
      case RateQuantity::kCFProduct:
        y = r.threshold * F;
        break;
      case RateQuantity::kFAlone:
        y = F;
        break;
      case RateQuantity::kCGap:
        y = r.threshold - d.lower();
        break;
    }
    detail::require(y > 0.0, "estimate_rate: quantity is not positive at some n");
    out.n_values.push_back(n);
    out.quantity_values.push_back(y);
    log_n.push_back(std::log(n));
    log_y.push_back(std::log(y));
  }
  out.fit = least_squares(log_n, log_y);
  return out;
}

// Limit of the optimal prize as n -> infinity:
//   0                                       if lower = 0
//   W lower (ln Wq - ln lower) / (Wq - lower)  otherwise (W at Wq = lower).
inline double optimal_prize_limit(double c_lo, double q, double W) {
  detail::require(std::isfinite(c_lo) && c_lo >= 0.0, "prize limit: lower bound must be >= 0");
  detail::require(std::isfinite(W) && std::isfinite(q), "prize limit: inputs must be finite");
  detail::require(W * q > 0.0, "prize limit: Wq must be > 0");
  if (c_lo == 0.0) return 0.0;
  // W * log1p(t) / t with t = (Wq - lower) / lower, equal to the closed form.
  const double t = (W * q - c_lo) / c_lo;
  if (std::abs(t) < 1e-300) return W;
  return W * std::log1p(t) / t;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_ASYMPTOTICS_HPP_
