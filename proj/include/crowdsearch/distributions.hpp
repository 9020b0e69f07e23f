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

// Cost distributions with finite support [lower, upper], 0 <= lower < upper.
//
// Three families are supported:
//   uniform(a, b)          F(c) = (c - a) / (b - a)
//   power(alpha)           F(c) = c^alpha on [0, 1]
//   piecewise_linear(k)    linear interpolation through knots (c_i, F_i)
//
// A distribution is an immutable value. cdf() clamps outside the support;
// pdf() rejects points outside it and returns the right-limit slope at
// interior kinks (left-limit slope at the upper endpoint).

#ifndef CROWDSEARCH_DISTRIBUTIONS_HPP_
#define CROWDSEARCH_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crowdsearch/errors.hpp"

namespace crowdsearch {

enum class DistributionKind { kUniform, kPower, kPiecewiseLinear };

inline std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kUniform:
      return "uniform";
    case DistributionKind::kPower:
      return "power";
    case DistributionKind::kPiecewiseLinear:
      return "piecewise_linear";
  }
  return "unknown";
}

struct Knot {
  double cost = 0.0;
  double cdf = 0.0;
};

class CostDistribution {
 public:
  static CostDistribution uniform(double a, double b) {
    detail::require(std::isfinite(a) && std::isfinite(b), "uniform: bounds must be finite");
    detail::require(a >= 0.0, "uniform: lower bound must be >= 0");
    detail::require(a < b, "uniform: requires a < b");
    CostDistribution d(DistributionKind::kUniform, a, b);
    return d;
  }

  static CostDistribution power(double alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0, "power: alpha must be > 0");
    CostDistribution d(DistributionKind::kPower, 0.0, 1.0);
    d.alpha_ = alpha;
    return d;
  }

  // Knots must have strictly increasing cost, nondecreasing cdf, first cdf 0
  // and last cdf 1 (each within 1e-9, then snapped exactly).
  static CostDistribution piecewise_linear(std::vector<Knot> knots) {
    detail::require(knots.size() >= 2, "piecewise_linear: need at least two knots");
    for (const Knot& k : knots) {
      detail::require(std::isfinite(k.cost) && std::isfinite(k.cdf),
                      "piecewise_linear: knots must be finite");
    }
    detail::require(knots.front().cost >= 0.0, "piecewise_linear: lower bound must be >= 0");
    for (std::size_t i = 1; i < knots.size(); ++i) {
      detail::require(knots[i].cost > knots[i - 1].cost,
                      "piecewise_linear: knot costs must be strictly increasing");
      detail::require(knots[i].cdf >= knots[i - 1].cdf,
                      "piecewise_linear: knot cdf values must be nondecreasing");
    }
    constexpr double kSnap = 1e-9;
    detail::require(std::abs(knots.front().cdf) <= kSnap,
                    "piecewise_linear: first knot must have cdf 0");
    detail::require(std::abs(knots.back().cdf - 1.0) <= kSnap,
                    "piecewise_linear: last knot must have cdf 1");
    knots.front().cdf = 0.0;
    knots.back().cdf = 1.0;
    for (Knot& k : knots) k.cdf = std::clamp(k.cdf, 0.0, 1.0);
    CostDistribution d(DistributionKind::kPiecewiseLinear, knots.front().cost,
                       knots.back().cost);
    d.knots_ = std::move(knots);
    return d;
  }

  DistributionKind kind() const { return kind_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double alpha() const { return alpha_; }
  const std::vector<Knot>& knots() const { return knots_; }
  bool in_support(double c) const { return c >= lower_ && c <= upper_; }

  double cdf(double c) const {
    if (!(c > lower_)) return 0.0;
    if (c >= upper_) return 1.0;
    switch (kind_) {
      case DistributionKind::kUniform:
        return (c - lower_) / (upper_ - lower_);
      case DistributionKind::kPower:
        return std::pow(c, alpha_);
      case DistributionKind::kPiecewiseLinear: {
        const std::size_t seg = segment_of(c);
        const Knot& a = knots_[seg];
        const Knot& b = knots_[seg + 1];
        return a.cdf + (b.cdf - a.cdf) * (c - a.cost) / (b.cost - a.cost);
      }
    }
    return 0.0;
  }

  double pdf(double c) const {
    if (!in_support(c)) throw ValidationError("pdf: point outside the support");
    switch (kind_) {
      case DistributionKind::kUniform:
        return 1.0 / (upper_ - lower_);
      case DistributionKind::kPower:
        return alpha_ * std::pow(c, alpha_ - 1.0);
      case DistributionKind::kPiecewiseLinear: {
        const std::size_t seg = c >= upper_ ? knots_.size() - 2 : segment_of(c);
        const Knot& a = knots_[seg];
        const Knot& b = knots_[seg + 1];
        return (b.cdf - a.cdf) / (b.cost - a.cost);
      }
    }
    return 0.0;
  }

  // Inverse cdf; for flat stretches of a piecewise-linear F returns the left end.
  double quantile(double u) const {
    detail::require(u >= 0.0 && u <= 1.0, "quantile: probability outside [0, 1]");
    switch (kind_) {
      case DistributionKind::kUniform:
        return lower_ + u * (upper_ - lower_);
      case DistributionKind::kPower:
        return std::pow(u, 1.0 / alpha_);
      case DistributionKind::kPiecewiseLinear: {
        if (u <= 0.0) return lower_;
        auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                                   [](const Knot& k, double p) { return k.cdf < p; });
        if (it == knots_.end()) return upper_;
        if (it == knots_.begin()) return it->cost;
        const Knot& b = *it;
        const Knot& a = *(it - 1);
        return a.cost + (b.cost - a.cost) * (u - a.cdf) / (b.cdf - a.cdf);
      }
    }
    return lower_;
  }

  // F(c) / f(c). Throws where the density vanishes.
  double reverse_hazard_ratio(double c) const {
    const double f = pdf(c);
    if (!(f > 0.0)) throw ValidationError("reverse_hazard_ratio: density is zero");
    if (kind_ == DistributionKind::kUniform) return c - lower_;
    return cdf(c) / f;
  }

 private:
  CostDistribution(DistributionKind kind, double lower, double upper)
      : kind_(kind), lower_(lower), upper_(upper) {}

  // Index of the segment [k_i, k_{i+1}) containing c; c strictly inside support.
  std::size_t segment_of(double c) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), c,
                               [](double v, const Knot& k) { return v < k.cost; });
    std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
    idx = idx == 0 ? 0 : idx - 1;
    return std::min(idx, knots_.size() - 2);
  }

  DistributionKind kind_;
  double lower_;
  double upper_;
  double alpha_ = 1.0;
  std::vector<Knot> knots_;
};

struct Assumption4Diagnostic {
  bool passed = true;
  std::size_t grid_size = 0;
  // First adjacent grid pair (c_i, c_{i+1}) where F/f drops.
  std::optional<std::pair<double, double>> first_violation;
  std::optional<std::pair<double, double>> violation_ratios;
};

// Checks that F/f is non-decreasing on `grid_size` equally spaced interior
// points. Points where the density vanishes are skipped.
inline Assumption4Diagnostic check_assumption4(const CostDistribution& d,
                                               std::size_t grid_size) {
  detail::require(grid_size >= 2, "check_assumption4: grid_size must be >= 2");
  Assumption4Diagnostic out;
  out.grid_size = grid_size;
  const double width = d.upper() - d.lower();
  std::optional<std::pair<double, double>> prev;  // (c, ratio)
  for (std::size_t i = 1; i <= grid_size; ++i) {
    const double c = d.lower() + width * static_cast<double>(i) /
                                     static_cast<double>(grid_size + 1);
    if (!(d.pdf(c) > 0.0)) continue;
    const double r = d.reverse_hazard_ratio(c);
    if (prev && r < prev->second - 1e-12 * std::max(1.0, std::abs(prev->second))) {
      out.passed = false;
      out.first_violation = std::make_pair(prev->first, c);
      out.violation_ratios = std::make_pair(prev->second, r);
      return out;
    }
    prev = std::make_pair(c, r);
  }
  return out;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_DISTRIBUTIONS_HPP_
