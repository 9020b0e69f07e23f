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

// Optimal single prize for a principal who values the object at W, then a
// Monte Carlo check that the chosen prize beats nearby alternatives.

#include <cstdio>

#include "crowdsearch/crowdsearch.hpp"

int main() {
  using namespace crowdsearch;
  const auto d = CostDistribution::uniform(0, 1);
  const PrincipalConfig cfg{4.0, 2.0, 0.5};
  const PrizeSolution s = optimal_prize(d, cfg);
  std::printf("threshold=%.6f prize=%.6f regime=%s\n", s.threshold, s.prize,
              std::string(to_string(s.regime)).c_str());

  for (double scale : {0.9, 1.0, 1.1}) {
    const double V = s.prize * scale;
    SimConfig sim;
    sim.replications = 200000;
    sim.seed = 42;
    const SimEstimate est = simulate(d, {cfg.n, cfg.q, V}, sim);
    std::printf("V=%.4f  (W - V) * P = %.5f +- %.5f\n", V,
                (cfg.W - V) * est.success_rate.value, (cfg.W - V) * est.success_rate.std_error);
  }
  return 0;
}
