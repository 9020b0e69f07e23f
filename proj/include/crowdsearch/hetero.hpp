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

// Agents that differ in discovery probability q_i (costs stay i.i.d.).
//
// With thresholds c_j, rival j finds the object with probability
// pi_j = q_j F(c_j); the number of rival finders T is Poisson-binomial and
//   Psi_i = q_i E[1 / (T + 1)].
// Equilibria solve c_i = V Psi_i(c_{-i}). Uniqueness is not guaranteed, so
// the solver returns the equilibrium reached from the symmetric start and
// best_response_scan_n2 exposes the full set for two agents.

#ifndef CROWDSEARCH_HETERO_HPP_
#define CROWDSEARCH_HETERO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/numeric.hpp"
#include "crowdsearch/principal.hpp"

namespace crowdsearch {

// Agents are stored sorted by q (largest first). order()[k] is the caller's
// index of the k-th sorted agent.
class HeteroContest {
 public:
  HeteroContest(CostDistribution d, std::vector<double> q_vec, double V)
      : d_(std::move(d)), V_(V) {
    detail::require(!q_vec.empty(), "hetero: need at least one agent");
    detail::require(std::isfinite(V) && V > 0.0, "hetero: V must be > 0");
    for (double q : q_vec) {
      detail::require(q > 0.0 && q <= 1.0, "hetero: each q_i must lie in (0, 1]");
    }
    order_.resize(q_vec.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return q_vec[a] > q_vec[b]; });
    q_.reserve(q_vec.size());
    for (std::size_t k : order_) q_.push_back(q_vec[k]);
  }

  const CostDistribution& distribution() const { return d_; }
  double V() const { return V_; }
  std::size_t size() const { return q_.size(); }
  const std::vector<double>& q() const { return q_; }
  const std::vector<std::size_t>& order() const { return order_; }

  double mean_q() const {
    return std::accumulate(q_.begin(), q_.end(), 0.0) / static_cast<double>(q_.size());
  }

  // Sorted-order vector back to the caller's order.
  std::vector<double> to_input_order(std::span<const double> sorted) const {
    std::vector<double> out(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) out[order_[k]] = sorted[k];
    return out;
  }

 private:
  CostDistribution d_;
  std::vector<double> q_;
  std::vector<std::size_t> order_;
  double V_;
};

/// pmf of a sum of independent Bernoulli(p_j), by iterative convolution.
inline std::vector<double> poisson_binomial_pmf(std::span<const double> p) {
  std::vector<double> pmf(p.size() + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t k = j + 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - p[j]) + pmf[k - 1] * p[j];
    pmf[0] *= 1.0 - p[j];
  }
  return pmf;
}

/// Psi_i with the other agents' thresholds given in sorted order, agent i removed.
inline double psi_i(const HeteroContest& h, std::size_t i, std::span<const double> c_minus_i) {
  detail::require(i < h.size(), "psi_i: index out of range");
  detail::require(c_minus_i.size() + 1 == h.size(), "psi_i: need n - 1 rival thresholds");
  std::vector<double> pi;
  pi.reserve(c_minus_i.size());
  for (std::size_t k = 0, j = 0; j < h.size(); ++j) {
    if (j == i) continue;
    detail::require_threshold(h.distribution(), c_minus_i[k]);
    pi.push_back(h.q()[j] * h.distribution().cdf(c_minus_i[k]));
    ++k;
  }
  const std::vector<double> pmf = poisson_binomial_pmf(pi);
  double expect = 0.0;
  for (std::size_t t = 0; t < pmf.size(); ++t) expect += pmf[t] / (t + 1.0);
  return h.q()[i] * expect;
}

/// Psi_i reading rivals from a full sorted threshold vector (entry i ignored).
inline double psi_i_full(const HeteroContest& h, std::size_t i, std::span<const double> c_vec) {
  detail::require(c_vec.size() == h.size(), "psi_i: threshold vector has the wrong length");
  detail::require(i < h.size(), "psi_i: index out of range");
  std::vector<double> rivals;
  rivals.reserve(h.size() - 1);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (j != i) rivals.push_back(c_vec[j]);
  }
  return psi_i(h, i, rivals);
}

struct ThresholdVector {
  std::vector<double> c;  // sorted agent order
  bool converged = false;
  int iterations = 0;
  double max_residual = 0.0;  // max_i |c_i - clamp(V Psi_i)|
};

// Agents pinned at an end of the support only need V Psi_i on the far side.
inline double max_indifference_residual(const HeteroContest& h, std::span<const double> c) {
  const CostDistribution& d = h.distribution();
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double target = std::clamp(h.V() * psi_i_full(h, i, c), d.lower(), d.upper());
    worst = std::max(worst, std::abs(c[i] - target));
  }
  return worst;
}

namespace detail {

// Solves a x = b in place by Gaussian elimination with partial pivoting.
// Returns false for a numerically singular matrix.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    }
    if (!(std::abs(a[piv * n + col]) > 1e-14)) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r * n + col] / a[col * n + col];
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= m * a[col * n + k];
      b[r] -= m * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
    b[r] = s / a[r * n + r];
  }
  return true;
}

// Newton on c_i - V Psi_i(c_{-i}) = 0 from `c`, with a central-difference
// Jacobian. Succeeds only if every iterate stays strictly inside the support.
inline bool newton_interior(const HeteroContest& h, std::vector<double>& c, double tol,
                            int& steps) {
  const CostDistribution& d = h.distribution();
  const std::size_t n = h.size();
  auto residual = [&](const std::vector<double>& x) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = x[i] - h.V() * psi_i_full(h, i, x);
    return g;
  };
  const double step = 1e-7 * (d.upper() - d.lower());
  std::vector<double> x = c;
  for (steps = 0; steps < 50; ++steps) {
    std::vector<double> g = residual(x);
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    if (worst <= tol) {
      c = x;
      return true;
    }
    std::vector<double> jac(n * n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> up = x, down = x;
      const double hj = std::min({step, x[j] - d.lower(), d.upper() - x[j]});
      if (!(hj > 0.0)) return false;
      up[j] += hj;
      down[j] -= hj;
      for (std::size_t i = 0; i < n; ++i) {
        jac[i * n + j] = i == j ? 1.0
                                : -h.V() * (psi_i_full(h, i, up) - psi_i_full(h, i, down)) / (2 * hj);
      }
    }
    std::vector<double> dx = g;
    for (double& v : dx) v = -v;
    if (!solve_dense(jac, dx)) return false;
    // Backtrack until the iterate is inside the support and the residual drops.
    bool moved = false;
    for (double t = 1.0; t > 1e-6 && !moved; t *= 0.5) {
      std::vector<double> trial = x;
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i) {
        trial[i] += t * dx[i];
        inside = trial[i] > d.lower() && trial[i] < d.upper();
      }
      if (!inside) continue;
      double next = 0.0;
      for (double v : residual(trial)) next = std::max(next, std::abs(v));
      if (next < worst) {
        x = std::move(trial);
        moved = true;
      }
    }
    if (!moved) return false;
  }
  return false;
}

}  // namespace detail

// Starts from the symmetric solve at the mean q. Newton is tried first so the
// result is the equilibrium continuous with the symmetric one; best-response
// dynamics can be unstable there and drift to a distant equilibrium. When
// Newton leaves the support (some agent at an end) Gauss-Seidel on
// c_i <- clamp(V Psi_i(c_{-i})) takes over; its right side does not depend on
// c_i, so each update is a direct evaluation.
inline ThresholdVector solve_thresholds(const HeteroContest& h, double tol = 1e-10,
                                        int max_sweeps = 10000) {
  const CostDistribution& d = h.distribution();
  const double n = static_cast<double>(h.size());
  const double start = solve_threshold(d, {n, h.mean_q(), h.V()}).threshold;
  ThresholdVector out;
  out.c.assign(h.size(), start);
  if (start > d.lower() && start < d.upper() && h.size() <= 200) {
    std::vector<double> c = out.c;
    int steps = 0;
    if (detail::newton_interior(h, c, std::min(tol, 1e-12), steps)) {
      out.c = std::move(c);
      out.converged = true;
      out.iterations = steps;
      out.max_residual = max_indifference_residual(h, out.c);
      return out;
    }
  }
  for (out.iterations = 1; out.iterations <= max_sweeps; ++out.iterations) {
    double change = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double next = std::clamp(h.V() * psi_i_full(h, i, out.c), d.lower(), d.upper());
      change = std::max(change, std::abs(next - out.c[i]));
      out.c[i] = next;
    }
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, max_sweeps);
  out.max_residual = max_indifference_residual(h, out.c);
  return out;
}

inline double success_probability_hetero(const HeteroContest& h, std::span<const double> c_vec) {
  detail::require(c_vec.size() == h.size(), "success_probability_hetero: wrong vector length");
  double miss = 1.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    detail::require_threshold(h.distribution(), c_vec[i]);
    miss *= 1.0 - h.q()[i] * h.distribution().cdf(c_vec[i]);
  }
  return 1.0 - miss;
}

/// sum_i F(c_i) Psi_i(c_{-i}): the same probability split into who wins.
inline double success_decomposition(const HeteroContest& h, std::span<const double> c_vec) {
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    total += h.distribution().cdf(c_vec[i]) * psi_i_full(h, i, c_vec);
  }
  return total;
}

struct HeteroPrincipalResult {
  ThresholdVector thresholds;          // fixed point of the Omega_i system
  std::vector<double> implied_prizes;  // c_i / Psi_i for each agent
  double prize_spread = 0.0;           // max - min of implied_prizes
  bool consistent = false;             // spread within 1e-8 (relative)
  bool assumption4 = true;
  double constrained_prize = 0.0;  // best single prize found by direct search
  ThresholdVector constrained_thresholds;
  double constrained_value = 0.0;  // (W - V) P at that prize
};

inline double hetero_principal_value(const HeteroContest& base, double W, double V) {
  const HeteroContest h(base.distribution(), base.to_input_order(base.q()), V);
  const ThresholdVector t = solve_thresholds(h);
  return (W - V) * success_probability_hetero(h, t.c);
}

// Omega_i(c) = W q_i prod_{j != i}(1 - q_j F(c_j)) - F(c_i) / f(c_i).
inline double omega_i(const HeteroContest& h, double W, std::size_t i,
                      std::span<const double> c_vec) {
  const CostDistribution& d = h.distribution();
  double others = 1.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (j != i) others *= 1.0 - h.q()[j] * d.cdf(c_vec[j]);
  }
  const double F = d.cdf(c_vec[i]);
  return W * h.q()[i] * others - (F > 0.0 ? d.reverse_hazard_ratio(c_vec[i]) : 0.0);
}

inline HeteroPrincipalResult solve_principal_hetero(const HeteroContest& h, double W,
                                                    double tol = 1e-10, int max_sweeps = 10000) {
  detail::require(std::isfinite(W) && W > 0.0, "solve_principal_hetero: W must be > 0");
  const CostDistribution& d = h.distribution();
  HeteroPrincipalResult out;
  out.assumption4 = check_assumption4(d, 200).passed;

  const double n = static_cast<double>(h.size());
  ThresholdVector& t = out.thresholds;
  t.c.assign(h.size(), optimal_prize(d, {W, n, h.mean_q()}).threshold);
  for (t.iterations = 1; t.iterations <= max_sweeps; ++t.iterations) {
    double change = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::vector<double> trial = t.c;
      auto gap = [&](double c) {
        trial[i] = c;
        return omega_i(h, W, i, trial) - c;
      };
      double next = 0.0;
      if (gap(d.lower()) <= 0.0) {
        next = d.lower();
      } else if (gap(d.upper()) >= 0.0) {
        next = d.upper();
      } else {
        next = bisect(gap, d.lower(), d.upper(), 1e-13).root;
      }
      change = std::max(change, std::abs(next - t.c[i]));
      t.c[i] = next;
    }
    if (change < tol) {
      t.converged = true;
      break;
    }
  }
  t.iterations = std::min(t.iterations, max_sweeps);
  if (!t.converged) {
    throw ConvergenceError("solve_principal_hetero: Omega system did not converge");
  }

  for (std::size_t i = 0; i < h.size(); ++i) {
    out.implied_prizes.push_back(t.c[i] / psi_i_full(h, i, t.c));
  }
  const auto [lo, hi] = std::minmax_element(out.implied_prizes.begin(), out.implied_prizes.end());
  out.prize_spread = *hi - *lo;
  out.consistent = out.prize_spread <= 1e-8 * std::max(1.0, std::abs(*hi));

  auto value = [&](double V) { return hetero_principal_value(h, W, V); };
  const GridMaximum best = refine_maximum(value, 1e-9 * W, W, 401, 1e-10);
  out.constrained_prize = best.argmax;
  out.constrained_value = best.value;
  const HeteroContest at_best(d, h.to_input_order(h.q()), best.argmax);
  out.constrained_thresholds = solve_thresholds(at_best);
  return out;
}

struct EquilibriumSegment {
  double c1_lower = 0.0;
  double c1_upper = 0.0;
  std::size_t grid_points = 0;  // 0 for an isolated root found by bisection
};

struct EquilibriumSet {
  std::vector<std::pair<double, double>> pairs;  // (c1, c2) with c2 = BR(c1)
  std::vector<EquilibriumSegment> segments;

  bool contains(double c1, double c2, double tol) const {
    for (const auto& [a, b] : pairs) {
      if (std::abs(a - c1) <= tol && std::abs(b - c2) <= tol) return true;
    }
    return false;
  }
};

// Two agents with a common q: BR(c) = qV (1 - (q/2) F(c)). Scans c1 over
// `grid` equal cells, keeps nodes with |BR(BR(c1)) - c1| <= 1e-9 and adds
// bisected sign changes elsewhere. Only pairs strictly inside the support
// are reported.
inline EquilibriumSet best_response_scan_n2(const CostDistribution& d, double q, double V,
                                            std::size_t grid) {
  detail::require(q > 0.0 && q <= 1.0, "best_response_scan_n2: q must lie in (0, 1]");
  detail::require(std::isfinite(V) && V > 0.0, "best_response_scan_n2: V must be > 0");
  detail::require(grid >= 2, "best_response_scan_n2: grid must be >= 2");
  constexpr double kTol = 1e-9;
  auto br = [&](double c) {
    return std::clamp(q * V * (1.0 - 0.5 * q * d.cdf(c)), d.lower(), d.upper());
  };
  auto gap = [&](double c) { return br(br(c)) - c; };
  auto inside = [&](double c) { return c > d.lower() && c < d.upper(); };

  const double lo = d.lower();
  const double step = (d.upper() - lo) / static_cast<double>(grid);
  auto node = [&](std::size_t k) { return k == grid ? d.upper() : lo + step * k; };

  EquilibriumSet out;
  std::vector<double> isolated;
  std::size_t run_start = 0;
  std::size_t run_length = 0;
  auto close_run = [&](std::size_t end) {
    if (run_length > 0) {
      out.segments.push_back({node(run_start), node(end), run_length});
    }
    run_length = 0;
  };

  double prev_gap = gap(node(0));
  bool prev_flag = std::abs(prev_gap) <= kTol;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double c = node(k);
    const double g = k == 0 ? prev_gap : gap(c);
    const bool flag = std::abs(g) <= kTol && inside(c) && inside(br(c));
    if (flag) {
      if (run_length == 0) run_start = k;
      ++run_length;
      out.pairs.emplace_back(c, br(c));
    } else {
      close_run(k - 1);
      if (k > 0 && !prev_flag && std::signbit(g) != std::signbit(prev_gap)) {
        const double root = bisect(gap, node(k - 1), c, 1e-14).root;
        if (inside(root) && inside(br(root))) isolated.push_back(root);
      }
    }
    prev_gap = g;
    prev_flag = flag;
  }
  close_run(grid);

  for (double r : isolated) {
    bool absorbed = false;
    for (const auto& s : out.segments) {
      if (r >= s.c1_lower - step && r <= s.c1_upper + step) absorbed = true;
    }
    if (absorbed) continue;
    out.segments.push_back({r, r, 0});
    out.pairs.emplace_back(r, br(r));
  }
  std::sort(out.segments.begin(), out.segments.end(),
            [](const auto& a, const auto& b) { return a.c1_lower < b.c1_lower; });
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_HETERO_HPP_
