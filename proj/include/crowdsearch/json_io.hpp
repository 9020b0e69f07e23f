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

// JSON encodings. Requires nlohmann/json (the vendored single header is
// picked up first).
//
//   {"kind":"uniform","a":0,"b":1}
//   {"kind":"power","alpha":20}
//   {"kind":"piecewise_linear","knots":[[0,0],[0.5,0.4],[1,1]]}
//
// Vectors (q per agent, prizes per rank, thresholds) are plain arrays.

#ifndef CROWDSEARCH_JSON_IO_HPP_
#define CROWDSEARCH_JSON_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/montecarlo.hpp"

namespace crowdsearch {

inline nlohmann::ordered_json parse_json(std::string_view text, std::string_view what) {
  try {
    return nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

namespace detail {

inline double json_number(const nlohmann::ordered_json& j, const char* key,
                          std::string_view what) {
  require(j.contains(key) && j.at(key).is_number(),
          std::string(what) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

}  // namespace detail

inline CostDistribution distribution_from_json(const nlohmann::ordered_json& j) {
  detail::require(j.is_object() && j.contains("kind") && j.at("kind").is_string(),
                  "distribution: expected an object with a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    return CostDistribution::uniform(detail::json_number(j, "a", "uniform"),
                                     detail::json_number(j, "b", "uniform"));
  }
  if (kind == "power") return CostDistribution::power(detail::json_number(j, "alpha", "power"));
  if (kind == "piecewise_linear") {
    detail::require(j.contains("knots") && j.at("knots").is_array(),
                    "piecewise_linear: missing 'knots' array");
    std::vector<Knot> knots;
    for (const auto& k : j.at("knots")) {
      detail::require(k.is_array() && k.size() == 2 && k[0].is_number() && k[1].is_number(),
                      "piecewise_linear: each knot must be [cost, cdf]");
      knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return CostDistribution::piecewise_linear(std::move(knots));
  }
  throw ValidationError("distribution: unknown kind '" + kind + "'");
}

inline CostDistribution parse_distribution(std::string_view text) {
  return distribution_from_json(parse_json(text, "distribution"));
}

inline nlohmann::ordered_json to_json(const CostDistribution& d) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(d.kind()));
  switch (d.kind()) {
    case DistributionKind::kUniform:
      j["a"] = d.lower();
      j["b"] = d.upper();
      break;
    case DistributionKind::kPower:
      j["alpha"] = d.alpha();
      break;
    case DistributionKind::kPiecewiseLinear: {
      auto knots = nlohmann::ordered_json::array();
      for (const Knot& k : d.knots()) knots.push_back({k.cost, k.cdf});
      j["knots"] = std::move(knots);
      break;
    }
  }
  return j;
}

inline std::vector<double> vector_from_json(std::string_view text, std::string_view what) {
  const auto j = parse_json(text, what);
  detail::require(j.is_array(), std::string(what) + ": expected a JSON array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    detail::require(x.is_number(), std::string(what) + ": expected a JSON array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}};
}

inline nlohmann::ordered_json to_json(const SimEstimate& s) {
  nlohmann::ordered_json j;
  j["replications"] = s.replications;
  j["thresholds"] = s.thresholds;
  j["success_rate"] = to_json(s.success_rate);
  j["searcher_win_rate"] = to_json(s.searcher_win_rate);
  j["mean_payoff_at_threshold"] = to_json(s.mean_payoff_at_threshold);
  j["expected_searchers"] = to_json(s.expected_searchers);
  auto agents = nlohmann::ordered_json::array();
  for (const auto& e : s.win_rate_per_agent) agents.push_back(to_json(e));
  j["win_rate_per_agent"] = std::move(agents);
  if (!s.rank_win_rates.empty()) {
    auto ranks = nlohmann::ordered_json::array();
    for (const auto& e : s.rank_win_rates) ranks.push_back(to_json(e));
    j["rank_win_rates"] = std::move(ranks);
    j["rank_matrix"] = s.rank_matrix;
  }
  return j;
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_JSON_IO_HPP_
