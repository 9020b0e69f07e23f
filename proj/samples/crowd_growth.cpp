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

// Prints the equilibrium threshold and success probability as the crowd
// grows, for a cost distribution with a strictly positive lower bound.

#include <cstdio>
#include <vector>

#include "crowdsearch/crowdsearch.hpp"

int main() {
  using namespace crowdsearch;
  const auto d = CostDistribution::uniform(0.25, 1.25);
  const double q = 0.5, V = 1.0;
  std::printf("n,threshold,success_prob,expected_searchers\n");
  for (double n : std::vector<double>{2, 5, 10, 50, 100, 1000, 10000, 100000}) {
    const EquilibriumResult r = solve_threshold(d, {n, q, V});
    std::printf("%.0f,%.6f,%.6f,%.4f\n", n, r.threshold, r.success_prob, r.expected_searchers);
  }
  const LimitResult lim = large_contest_limit(d.lower(), q, V);
  std::printf("# limit: kappa=%.6f success=%.6f\n", lim.kappa, lim.p_infinity);
  return 0;
}
