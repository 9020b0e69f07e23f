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

// Symmetric threshold equilibrium of the baseline crowdsearch contest.
//
// With n agents each searching iff their cost is at most c, and each searcher
// finding the object with probability q:
//
//   P(c)   = 1 - (1 - q F(c))^n                  probability of success
//   Phi(c) = P(c) / (n F(c)),  Phi(lower) = q    win probability of a searcher
//
// The equilibrium threshold is the unique fixed point c* = V Phi(c*). Phi is
// strictly decreasing in c, so g(c) = c - V Phi(c) is strictly increasing and
// bisection over the support is globally safe.

#ifndef CROWDSEARCH_EQUILIBRIUM_HPP_
#define CROWDSEARCH_EQUILIBRIUM_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"

namespace crowdsearch {

/// Baseline contest parameters. n is real-valued (n >= 1) so that sweeps can
/// treat the crowd size as continuous.
struct ContestConfig {
  double n = 1.0;
  double q = 1.0;
  double V = 1.0;

  void validate() const {
    detail::require(std::isfinite(n) && std::isfinite(q) && std::isfinite(V),
                    "contest: parameters must be finite");
    detail::require(n >= 1.0, "contest: n must be >= 1");
    detail::require(q > 0.0 && q <= 1.0, "contest: q must lie in (0, 1]");
    detail::require(V > 0.0, "contest: V must be > 0");
  }
};

struct EquilibriumResult {
  ContestConfig config;
  double threshold = 0.0;           // c*
  double success_prob = 0.0;        // P(c*)
  double expected_searchers = 0.0;  // n F(c*)
  double win_prob = 0.0;            // Phi(c*)
  bool interior = false;
  double residual = 0.0;  // |c* - V Phi(c*)|
  int iterations = 0;
};

namespace detail {

inline void require_threshold(const CostDistribution& d, double c_hat) {
  require(std::isfinite(c_hat) && d.in_support(c_hat), "threshold outside the cost support");
}

// Phi as a function of F directly. Below n q F = 1e-8 the quadratic series
// q (1 - (n-1) x / 2 + (n-1)(n-2) x^2 / 6), x = q F, is used; its truncation
// error scales with (n x)^3.
inline double phi_from_cdf(double F, double q, double n) {
  if (!(F > 0.0)) return q;
  const double x = q * F;
  if (n * x < 1e-8) {
    return q * (1.0 - (n - 1.0) * x / 2.0 + (n - 1.0) * (n - 2.0) * x * x / 6.0);
  }
  return one_minus_pow_one_minus(x, n) / (n * F);
}

}  // namespace detail

inline double phi(const CostDistribution& d, const ContestConfig& cfg, double c_hat) {
  detail::require_threshold(d, c_hat);
  return detail::phi_from_cdf(d.cdf(c_hat), cfg.q, cfg.n);
}

inline double success_probability(const CostDistribution& d, const ContestConfig& cfg,
                                  double c_hat) {
  detail::require_threshold(d, c_hat);
  return one_minus_pow_one_minus(cfg.q * d.cdf(c_hat), cfg.n);
}

struct InteriorityDiagnostic {
  double lower_margin = 0.0;  // qV - lower
  double upper_margin = 0.0;  // upper - V (1 - (1-q)^n) / n
  bool lower_ok() const { return lower_margin > 0.0; }
  bool upper_ok() const { return upper_margin > 0.0; }
  bool passed() const { return lower_ok() && upper_ok(); }
};

inline InteriorityDiagnostic check_interiority(const CostDistribution& d,
                                               const ContestConfig& cfg) {
  cfg.validate();
  InteriorityDiagnostic out;
  out.lower_margin = cfg.q * cfg.V - d.lower();
  out.upper_margin = d.upper() - cfg.V * one_minus_pow_one_minus(cfg.q, cfg.n) / cfg.n;
  return out;
}

namespace detail {

inline EquilibriumResult finish(const CostDistribution& d, const ContestConfig& cfg,
                                double c, bool interior, int iterations) {
  EquilibriumResult r;
  r.config = cfg;
  r.threshold = c;
  r.interior = interior;
  r.iterations = iterations;
  const double F = d.cdf(c);
  r.success_prob = one_minus_pow_one_minus(cfg.q * F, cfg.n);
  r.expected_searchers = cfg.n * F;
  r.win_prob = phi_from_cdf(F, cfg.q, cfg.n);
  r.residual = std::abs(c - cfg.V * r.win_prob);
  return r;
}

}  // namespace detail

// Solves c = V Phi(c). Outside the interior regime the threshold is clamped to
// the violated end of the support and `interior` is false.
inline EquilibriumResult solve_threshold(const CostDistribution& d, const ContestConfig& cfg,
                                         double tol = kDefaultTolerance) {
  cfg.validate();
  detail::require(tol > 0.0, "solve_threshold: tolerance must be > 0");
  const auto diag = check_interiority(d, cfg);
  if (!diag.lower_ok()) return detail::finish(d, cfg, d.lower(), false, 0);
  if (!diag.upper_ok()) return detail::finish(d, cfg, d.upper(), false, 0);
  auto g = [&](double c) { return c - cfg.V * detail::phi_from_cdf(d.cdf(c), cfg.q, cfg.n); };
  const RootResult root = bisect(g, d.lower(), d.upper(), tol, 400, tol);
  return detail::finish(d, cfg, root.root, true, root.iterations);
}

inline std::vector<EquilibriumResult> sweep_n(const CostDistribution& d, double q, double V,
                                              std::span<const double> n_list,
                                              double tol = kDefaultTolerance) {
  std::vector<EquilibriumResult> rows;
  rows.reserve(n_list.size());
  for (double n : n_list) rows.push_back(solve_threshold(d, {n, q, V}, tol));
  return rows;
}

/// Left minus right side of the dP*/dn >= 0 condition at threshold c*:
///   (1 - qF) ln(1 - qF) / (-qF)  -  1 / (1 + F / (c f)).
inline double dpdn_margin(const CostDistribution& d, double q, double c_star) {
  detail::require_threshold(d, c_star);
  detail::require(q > 0.0 && q <= 1.0, "dpdn: q must lie in (0, 1]");
  const double F = d.cdf(c_star);
  const double f = d.pdf(c_star);
  detail::require(F > 0.0, "dpdn: F(c*) must be positive");
  detail::require(f > 0.0, "dpdn: density at c* must be positive");
  detail::require(c_star > 0.0, "dpdn: c* must be positive");
  const double x = q * F;
  const double lhs = x >= 1.0 ? 0.0 : (1.0 - x) * std::log1p(-x) / (-x);
  const double rhs = 1.0 / (1.0 + F / (c_star * f));
  return lhs - rhs;
}

inline bool dpdn_holds(const CostDistribution& d, double q, double c_star) {
  return dpdn_margin(d, q, c_star) >= 0.0;
}

// q-dagger = 1 / (sup c f(c) + 1). Piecewise-linear densities take their
// supremum as a left limit at a knot, so those limits are included.
inline double q_dagger(const CostDistribution& d) {
  auto cf = [&](double c) { return c * d.pdf(c); };
  double best = refine_maximum(cf, d.lower(), d.upper()).value;
  if (d.kind() == DistributionKind::kPiecewiseLinear) {
    const auto& k = d.knots();
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      best = std::max(best, k[i + 1].cost * (k[i + 1].cdf - k[i].cdf) /
                                (k[i + 1].cost - k[i].cost));
    }
  }
  if (!std::isfinite(best)) throw ValidationError("q_dagger: c f(c) is unbounded");
  return 1.0 / (best + 1.0);
}

// Root in (0, 1) of (1 - y) ln(1 - y) + y alpha / (1 + alpha). Below it the
// success probability rises with n for F(c) = c^alpha, whatever V is.
inline double q_dagger_power(double alpha) {
  detail::require(std::isfinite(alpha) && alpha > 0.0, "q_dagger_power: alpha must be > 0");
  const double slope = alpha / (1.0 + alpha);
  auto h = [&](double y) {
    const double l = y >= 1.0 ? 0.0 : (1.0 - y) * std::log1p(-y);
    return l + y * slope;
  };
  return bisect(h, 1e-300, 1.0, 1e-17, 2000).root;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_EQUILIBRIUM_HPP_
