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

// Small numerical kernels shared by the solvers: bracketing root finders,
// log-domain power helpers, least squares on pairs, and a grid maximizer.

#ifndef CROWDSEARCH_NUMERIC_HPP_
#define CROWDSEARCH_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "crowdsearch/errors.hpp"

namespace crowdsearch {

inline constexpr double kDefaultTolerance = 1e-12;

struct RootResult {
  double root = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Bisection on [lo, hi] for a function whose values at the two ends do not
// share a sign. Stops once the bracket is narrower than `tol` and |f| at its
// midpoint is at most `f_tol`, or the bracket cannot be split further.
template <class Fn>
RootResult bisect(Fn&& fn, double lo, double hi, double tol = kDefaultTolerance,
                  int max_iterations = 400,
                  double f_tol = std::numeric_limits<double>::infinity()) {
  double f_lo = fn(lo);
  if (f_lo == 0.0) return {lo, 0, true};
  double f_hi = fn(hi);
  if (f_hi == 0.0) return {hi, 0, true};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw ValidationError("bisect: root is not bracketed");
  }
  RootResult out;
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) {
      out.converged = true;
      break;
    }
    const double f_mid = fn(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      out.converged = true;
      break;
    }
    if (hi - lo <= tol && std::abs(f_mid) <= f_tol) {
      out.converged = true;
      break;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  out.root = 0.5 * (lo + hi);
  return out;
}

/// (1 - x)^n for x in [0, 1] and real n >= 0, evaluated in the log domain.
inline double pow_one_minus(double x, double n) {
  if (x >= 1.0) return n == 0.0 ? 1.0 : 0.0;
  return std::exp(n * std::log1p(-x));
}

/// 1 - (1 - x)^n without cancellation for small x.
inline double one_minus_pow_one_minus(double x, double n) {
  if (x >= 1.0) return n == 0.0 ? 0.0 : 1.0;
  return -std::expm1(n * std::log1p(-x));
}

/// log of the binomial coefficient C(n, k) for real n >= k >= 0.
inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// C(n, k) for integers; exact in double up to n around 60, log-domain beyond.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n > 60) return std::exp(log_binomial(n, k));
  k = std::min(k, n - k);
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares for y = intercept + slope * x.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "least_squares: size mismatch");
  detail::require(x.size() >= 2, "least_squares: need at least two points");
  const double count = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  detail::require(sxx > 0.0, "least_squares: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

struct GridMaximum {
  double argmax = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// Evaluates fn on `points` equally spaced nodes over [lo, hi] and returns the
// smallest node attaining the maximum (strict comparison keeps the first).
template <class Fn>
GridMaximum grid_maximize(Fn&& fn, double lo, double hi, std::size_t points) {
  detail::require(points >= 2, "grid_maximize: need at least two nodes");
  GridMaximum best;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + step * static_cast<double>(i);
    const double v = fn(x);
    if (v > best.value) {
      best.value = v;
      best.argmax = x;
    }
  }
  return best;
}

// Grid search followed by golden-section refinement on the cell around the
// best node. Suitable for unimodal-on-the-cell objectives.
template <class Fn>
GridMaximum refine_maximum(Fn&& fn, double lo, double hi, std::size_t points = 2001,
                           double tol = 1e-13) {
  GridMaximum coarse = grid_maximize(fn, lo, hi, points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  double a = std::max(lo, coarse.argmax - step);
  double b = std::min(hi, coarse.argmax + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    }
  }
  const double x = 0.5 * (a + b);
  const double v = fn(x);
  if (v > coarse.value) return {x, v};
  return coarse;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_NUMERIC_HPP_
