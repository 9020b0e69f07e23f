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

// Rank prizes. Finders are ranked uniformly at random and rank m receives
// v[m-1]; structures are monotone (v1 >= ... >= vn >= 0) and sum to V.
//
//   P^m(c)   probability that at least m agents find the object
//   Phi^m(c) probability a searcher is ranked m-th  = P^m(c) / (n F(c))
//
// The equilibrium threshold solves c = sum_m v_m Phi^m(c). Only Phi^1 is
// monotone in c, so the solver scans for every sign change instead of
// assuming a single crossing.

#ifndef CROWDSEARCH_MULTIPRIZE_HPP_
#define CROWDSEARCH_MULTIPRIZE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"
#include "crowdsearch/principal.hpp"

namespace crowdsearch {

class PrizeStructure {
 public:
  // Total is taken to be the sum of `prizes`.
  explicit PrizeStructure(std::vector<double> prizes) : v_(std::move(prizes)) {
    detail::require(!v_.empty(), "prize structure: need at least one prize");
    for (std::size_t i = 0; i < v_.size(); ++i) {
      detail::require(std::isfinite(v_[i]) && v_[i] >= 0.0,
                      "prize structure: prizes must be finite and nonnegative");
      if (i > 0) {
        detail::require(v_[i] <= v_[i - 1], "prize structure: prizes must be nonincreasing");
      }
    }
    total_ = std::accumulate(v_.begin(), v_.end(), 0.0);
    detail::require(total_ > 0.0, "prize structure: total prize must be positive");
  }

  PrizeStructure(std::vector<double> prizes, double total) : PrizeStructure(std::move(prizes)) {
    detail::require(std::abs(total_ - total) <= 1e-12 * std::max(1.0, std::abs(total)),
                    "prize structure: prizes must sum to V");
    total_ = total;
  }

  static PrizeStructure winner_takes_all(double V, std::size_t n) {
    std::vector<double> v(n, 0.0);
    v.at(0) = V;
    return PrizeStructure(std::move(v), V);
  }

  static PrizeStructure equal_split(double V, std::size_t n) {
    detail::require(n >= 1, "prize structure: need at least one prize");
    return PrizeStructure(std::vector<double>(n, V / static_cast<double>(n)), V);
  }

  std::size_t size() const { return v_.size(); }
  double total() const { return total_; }
  double operator[](std::size_t m) const { return v_[m]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
  double total_ = 0.0;
};

namespace detail {

// Binomial(n, p) pmf at k, exact coefficients for n <= 60 and log-domain above.
inline double binomial_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  if (n <= 60) return binomial(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
  return std::exp(log_binomial(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

inline void require_rank(int n, int m) {
  require(n >= 1, "rank prizes: n must be >= 1");
  require(m >= 1 && m <= n, "rank prizes: rank m out of range");
}

}  // namespace detail

// P^1 .. P^n at F(c) = F:
//   P^m = sum_{k=m}^{n} C(n,k) F^k (1-F)^{n-k} sum_{t=m}^{k} C(k,t) q^t (1-q)^{k-t}.
inline std::vector<double> p_m_all_from_cdf(double F, double q, int n) {
  detail::require(n >= 1, "rank prizes: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  std::vector<double> tail;
  for (int k = 1; k <= n; ++k) {
    const double searchers = detail::binomial_pmf(n, k, F);
    if (searchers == 0.0) continue;
    // tail[t] = P(Bin(k, q) >= t), accumulated from the top.
    tail.assign(static_cast<std::size_t>(k) + 2, 0.0);
    for (int t = k; t >= 1; --t) tail[t] = tail[t + 1] + detail::binomial_pmf(k, t, q);
    for (int m = 1; m <= k; ++m) out[m - 1] += searchers * tail[m];
  }
  return out;
}

inline double p_m(const CostDistribution& d, double q, int n, int m, double c_hat) {
  detail::require_threshold(d, c_hat);
  detail::require_rank(n, m);
  return p_m_all_from_cdf(d.cdf(c_hat), q, n)[m - 1];
}

inline std::vector<double> phi_m_all_from_cdf(double F, double q, int n) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (!(F > 0.0)) {
    out[0] = q;
    return out;
  }
  const std::vector<double> pm = p_m_all_from_cdf(F, q, n);
  for (int m = 0; m < n; ++m) out[m] = pm[m] / (n * F);
  return out;
}

/// Phi^m through the ratio P^m / (n F).
inline double phi_m(const CostDistribution& d, double q, int n, int m, double c_hat) {
  detail::require_threshold(d, c_hat);
  detail::require_rank(n, m);
  return phi_m_all_from_cdf(d.cdf(c_hat), q, n)[m - 1];
}

/// Phi^m summed directly over the number of other searchers k and other
/// finders t:  q sum_{k>=m-1} C(n-1,k) F^k (1-F)^{n-1-k} sum_{t>=m-1} C(k,t) q^t (1-q)^{k-t} / (t+1).
inline double phi_m_direct(const CostDistribution& d, double q, int n, int m, double c_hat) {
  detail::require_threshold(d, c_hat);
  detail::require_rank(n, m);
  const double F = d.cdf(c_hat);
  double sum = 0.0;
  for (int k = m - 1; k <= n - 1; ++k) {
    const double others = detail::binomial_pmf(n - 1, k, F);
    if (others == 0.0) continue;
    double inner = 0.0;
    for (int t = m - 1; t <= k; ++t) inner += detail::binomial_pmf(k, t, q) / (t + 1.0);
    sum += others * inner;
  }
  return q * sum;
}

inline double aggregate_reward(const PrizeStructure& v, double F, double q) {
  const std::vector<double> phis = phi_m_all_from_cdf(F, q, static_cast<int>(v.size()));
  double total = 0.0;
  for (std::size_t m = 0; m < v.size(); ++m) total += v[m] * phis[m];
  return total;
}

struct MultiEquilibriumResult {
  double threshold = 0.0;
  bool interior = false;
  double residual = 0.0;
  double success_prob = 0.0;
  double expected_searchers = 0.0;
  std::vector<double> roots;  // every fixed point located in the bracket
};

inline MultiEquilibriumResult solve_threshold_multi(const CostDistribution& d, double q,
                                                    const PrizeStructure& v,
                                                    double tol = kDefaultTolerance) {
  detail::require(q > 0.0 && q <= 1.0, "solve_threshold_multi: q must lie in (0, 1]");
  const int n = static_cast<int>(v.size());
  const double V = v.total();
  auto reward = [&](double c) { return aggregate_reward(v, d.cdf(c), q); };
  auto gap = [&](double c) { return c - reward(c); };

  MultiEquilibriumResult out;
  auto finish = [&](double c) {
    out.threshold = c;
    const double F = d.cdf(c);
    out.residual = std::abs(gap(c));
    out.success_prob = one_minus_pow_one_minus(q * F, n);
    out.expected_searchers = n * F;
    return out;
  };

  if (!(d.lower() < reward(d.lower()))) return finish(d.lower());
  if (!(reward(d.upper()) < d.upper())) return finish(d.upper());
  out.interior = true;

  // Fixed points lie between the equal-split and winner-takes-all thresholds.
  const double eps = 1e-9 * (d.upper() - d.lower());
  const EquilibriumResult wta = solve_threshold(d, {static_cast<double>(n), q, V}, tol);
  double lo = std::max(d.lower(), V * q / n - eps);
  double hi = std::min(d.upper(), wta.threshold + eps);
  if (!(lo < hi)) {
    lo = d.lower();
    hi = d.upper();
  }

  constexpr int kCells = 256;
  double a = lo;
  double ga = gap(a);
  if (ga == 0.0) out.roots.push_back(a);
  for (int i = 1; i <= kCells; ++i) {
    const double b = i == kCells ? hi : lo + (hi - lo) * i / kCells;
    const double gb = gap(b);
    if (gb == 0.0) {
      out.roots.push_back(b);
    } else if (ga != 0.0 && std::signbit(ga) != std::signbit(gb)) {
      out.roots.push_back(bisect(gap, a, b, tol, 400, tol).root);
    }
    a = b;
    ga = gb;
  }
  if (out.roots.empty()) {
    throw ConvergenceError("solve_threshold_multi: no fixed point found in the bracket");
  }
  if (out.roots.size() == 1) return finish(out.roots.front());

  // Several crossings: follow damped iteration and report the root it settles near.
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 10000; ++it) {
    const double next = std::clamp(c + 0.5 * (reward(c) - c), d.lower(), d.upper());
    if (std::abs(next - c) < tol) {
      c = next;
      break;
    }
    c = next;
  }
  const double chosen = *std::min_element(out.roots.begin(), out.roots.end(),
                                          [&](double x, double y) {
                                            return std::abs(x - c) < std::abs(y - c);
                                          });
  return finish(chosen);
}

/// W P(c^v) - sum_m v_m P^m(c^v) at the equilibrium induced by v.
inline double principal_value_multi(const CostDistribution& d, double q, double W,
                                    const PrizeStructure& v) {
  detail::require(std::isfinite(W) && W > 0.0, "principal_value_multi: W must be > 0");
  const MultiEquilibriumResult eq = solve_threshold_multi(d, q, v);
  const std::vector<double> pm =
      p_m_all_from_cdf(d.cdf(eq.threshold), q, static_cast<int>(v.size()));
  double paid = 0.0;
  for (std::size_t m = 0; m < v.size(); ++m) paid += v[m] * pm[m];
  return W * pm[0] - paid;
}

struct ThresholdInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double c, double tol = 1e-12) const {
    return c >= lower - tol && c <= upper + tol;
  }
};

/// Thresholds reachable with some structure of total V: [Vq/n, c*(V)],
/// clamped to the support.
inline ThresholdInterval achievable_set(const CostDistribution& d, double q, int n, double V) {
  detail::require(n >= 1, "achievable_set: n must be >= 1");
  const EquilibriumResult wta = solve_threshold(d, {static_cast<double>(n), q, V});
  ThresholdInterval out;
  out.lower = std::clamp(V * q / n, d.lower(), d.upper());
  out.upper = wta.threshold;
  return out;
}

enum class StructureRegime { kEqualSplit, kInterior, kWinnerTakesAll };

inline std::string_view to_string(StructureRegime r) {
  switch (r) {
    case StructureRegime::kEqualSplit:
      return "equal-split";
    case StructureRegime::kInterior:
      return "interior";
    case StructureRegime::kWinnerTakesAll:
      return "winner-takes-all";
  }
  return "unknown";
}

struct OptimalStructure {
  double threshold = 0.0;
  PrizeStructure structure = PrizeStructure::winner_takes_all(1.0, 1);
  StructureRegime regime = StructureRegime::kInterior;
  double value = 0.0;   // W P(c) - sum v_m P^m(c)
  double lambda = 0.0;  // weight on winner-takes-all in the recovered mix
  double unconstrained_threshold = 0.0;
  ThresholdInterval achievable;
  double w_lower = 0.0;  // valuations separating the three regimes
  double w_upper = 0.0;
  bool certified = true;
};

namespace detail {

// Valuation W at which Omega(c) = c, i.e. (c + F/f) / (q (1 - qF)^{n-1}).
inline double valuation_for_threshold(const CostDistribution& d, double q, double n, double c) {
  const double F = d.cdf(c);
  const double ratio = F > 0.0 ? d.reverse_hazard_ratio(c) : 0.0;
  const double denom = q * pow_one_minus(q * F, n - 1.0);
  return denom > 0.0 ? (c + ratio) / denom : std::numeric_limits<double>::infinity();
}

}  // namespace detail

// Chooses the threshold in the achievable set that maximizes the principal's
// objective and recovers a structure implementing it as a mix of
// winner-takes-all (weight lambda) and equal split (weight 1 - lambda).
inline OptimalStructure optimal_prize_structure(const CostDistribution& d, double q, int n,
                                                double W, double V) {
  detail::require(std::isfinite(V) && V > 0.0, "optimal_prize_structure: V must be > 0");
  const PrincipalConfig pcfg{W, static_cast<double>(n), q};
  pcfg.validate();
  OptimalStructure out;
  out.achievable = achievable_set(d, q, n, V);
  const ThresholdInterval& set = out.achievable;

  const bool single_peaked = check_assumption4(d, 200).passed;
  const PrizeSolution unconstrained = optimal_prize(d, pcfg);
  out.unconstrained_threshold = unconstrained.threshold;
  double target = std::clamp(unconstrained.threshold, set.lower, set.upper);
  if (!single_peaked) {
    auto obj = [&](double c) { return principal_objective(d, pcfg, c); };
    target = refine_maximum(obj, set.lower, set.upper, 20001).argmax;
    out.certified = false;
  }

  const double rf = 1e-12 * std::max(1.0, set.upper - set.lower);
  const double equal_reward = V * q / n;
  if (target <= set.lower + rf) {
    out.regime = StructureRegime::kEqualSplit;
    out.lambda = 0.0;
    target = set.lower;
  } else if (target >= set.upper - rf) {
    out.regime = StructureRegime::kWinnerTakesAll;
    out.lambda = 1.0;
    target = set.upper;
  } else {
    out.regime = StructureRegime::kInterior;
    const double top_reward = V * detail::phi_from_cdf(d.cdf(target), q, n);
    out.lambda = (target - equal_reward) / (top_reward - equal_reward);
    if (!(out.lambda >= -1e-12 && out.lambda <= 1.0 + 1e-12)) {
      throw std::logic_error("optimal_prize_structure: mixing weight outside [0, 1]");
    }
    out.lambda = std::clamp(out.lambda, 0.0, 1.0);
  }
  out.threshold = target;

  std::vector<double> mix(static_cast<std::size_t>(n), (1.0 - out.lambda) * V / n);
  mix[0] += out.lambda * V;
  out.structure = PrizeStructure(std::move(mix), V);

  const std::vector<double> pm = p_m_all_from_cdf(d.cdf(target), q, n);
  double paid = 0.0;
  for (int m = 0; m < n; ++m) paid += out.structure[m] * pm[m];
  out.value = W * pm[0] - paid;

  out.w_lower = detail::valuation_for_threshold(d, q, n, set.lower);
  out.w_upper = detail::valuation_for_threshold(d, q, n, set.upper);
  return out;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_MULTIPRIZE_HPP_
