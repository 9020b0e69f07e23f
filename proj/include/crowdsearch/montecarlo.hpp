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

// Monte Carlo simulation of the full game: i.i.d. cost draws, threshold play,
// independent discovery and a uniformly random award among finders.
//
// Replications are cut into fixed-size chunks. Chunk k draws from its own
// mt19937_64 seeded with (seed, k), and chunk results are reduced in chunk
// order, so estimates are bit-identical for any thread count.
//
// An agent searches iff its cost is at most the threshold, an event of
// probability F(threshold); costs are drawn in probability space. With a
// common threshold the gaps between searchers are drawn as geometric
// variables instead of one uniform per agent, which is the same process.

#ifndef CROWDSEARCH_MONTECARLO_HPP_
#define CROWDSEARCH_MONTECARLO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "crowdsearch/distributions.hpp"
#include "crowdsearch/equilibrium.hpp"
#include "crowdsearch/errors.hpp"
#include "crowdsearch/expert.hpp"
#include "crowdsearch/hetero.hpp"
#include "crowdsearch/multiprize.hpp"

namespace crowdsearch {

enum class SimVariant { kBaseline, kExpert, kMultiprize, kHetero };

inline std::string_view to_string(SimVariant v) {
  switch (v) {
    case SimVariant::kBaseline:
      return "baseline";
    case SimVariant::kExpert:
      return "expert";
    case SimVariant::kMultiprize:
      return "multiprize";
    case SimVariant::kHetero:
      return "hetero";
  }
  return "unknown";
}

struct SimConfig {
  std::size_t replications = 100000;
  std::uint64_t seed = 1;
  SimVariant variant = SimVariant::kBaseline;
  ExpertConfig expert;            // kExpert
  std::vector<double> prizes;     // kMultiprize: one per rank, summing to V
  std::vector<double> q_vec;      // kHetero: one per agent, caller's order
  // Empty: play the equilibrium of the variant. One entry: symmetric.
  // Otherwise one per agent (caller's order).
  std::vector<double> thresholds;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate(std::size_t n) const {
    detail::require(replications >= 1, "simulate: replications must be >= 1");
    if (variant == SimVariant::kExpert) expert.validate();
    if (variant == SimVariant::kMultiprize) {
      detail::require(prizes.size() == n, "simulate: need one prize per rank");
    }
    if (variant == SimVariant::kHetero) {
      detail::require(q_vec.size() == n, "simulate: need one q per agent");
    }
    detail::require(thresholds.size() <= 1 || thresholds.size() == n,
                    "simulate: thresholds must be symmetric or one per agent");
  }
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SimEstimate {
  std::size_t replications = 0;
  std::vector<double> thresholds;  // played, caller's order
  Estimate success_rate;
  Estimate searcher_win_rate;  // pooled over agents: wins / searches
  std::vector<Estimate> win_rate_per_agent;
  Estimate mean_payoff_at_threshold;  // (prize - threshold) per search
  Estimate expected_searchers;
  std::vector<Estimate> rank_win_rates;          // per rank, pooled (multiprize)
  std::vector<std::vector<double>> rank_matrix;  // agent x rank frequencies (multiprize)
};

namespace detail {

inline constexpr std::size_t kChunkSize = 8192;

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 chunk_stream(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// Runs body(chunk_index, first_rep, reps, rng) -> Acc for every chunk and
// returns the accumulators in chunk order.
template <class Acc, class Body>
std::vector<Acc> run_chunks(std::size_t replications, std::uint64_t seed, unsigned threads,
                            Body&& body) {
  const std::size_t chunks = (replications + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> out(chunks);
  auto work = [&](std::size_t k) {
    const std::size_t first = k * kChunkSize;
    const std::size_t reps = std::min(kChunkSize, replications - first);
    std::mt19937_64 rng = chunk_stream(seed, k);
    out[k] = body(k, first, reps, rng);
  };
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  if (workers <= 1) {
    for (std::size_t k = 0; k < chunks; ++k) work(k);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < chunks; k += workers) work(k);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

// Ratio sum(X) / sum(Y) over replications with a delta-method standard error.
struct RatioSums {
  double x = 0.0, y = 0.0, xx = 0.0, xy = 0.0, yy = 0.0;

  void add(double xi, double yi) {
    x += xi;
    y += yi;
    xx += xi * xi;
    xy += xi * yi;
    yy += yi * yi;
  }
  void merge(const RatioSums& o) {
    x += o.x;
    y += o.y;
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
  }
  Estimate estimate(double n) const {
    if (!(y > 0.0)) return {};
    const double r = x / y;
    const double ybar = y / n;
    const double ss = std::max(0.0, xx - 2.0 * r * xy + r * r * yy);
    const double se = n > 1.0 ? std::sqrt(ss / (n * (n - 1.0))) / ybar : 0.0;
    return {r, se};
  }
};

struct MeanSums {
  double s = 0.0, ss = 0.0;

  void add(double v) {
    s += v;
    ss += v * v;
  }
  void merge(const MeanSums& o) {
    s += o.s;
    ss += o.ss;
  }
  Estimate estimate(double n) const {
    const double mean = s / n;
    const double var = n > 1.0 ? std::max(0.0, (ss - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
  }
};

// One contest with everything fixed except the random draws.
class Game {
 public:
  Game(const CostDistribution& d, const ContestConfig& cfg, const SimConfig& sim)
      : n_(static_cast<std::size_t>(cfg.n)), sim_(sim) {
    q_.assign(n_, cfg.q);
    if (sim.variant == SimVariant::kHetero) q_ = sim.q_vec;
    prizes_.assign(n_, 0.0);
    if (sim.variant == SimVariant::kMultiprize) {
      prizes_ = PrizeStructure(sim.prizes, cfg.V).values();
    } else {
      prizes_[0] = cfg.V;
    }
    thresholds_ = resolve_thresholds(d, cfg, sim);
    for (double c : thresholds_) {
      require_threshold(d, c);
      search_prob_.push_back(d.cdf(c));
    }
    symmetric_ = std::all_of(search_prob_.begin(), search_prob_.end(),
                             [&](double p) { return p == search_prob_[0]; });
    finders_.reserve(n_ + 1);
    rank_.assign(n_, -1);
  }

  std::size_t size() const { return n_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  double prize_for_rank(int r) const { return r >= 0 ? prizes_[r] : 0.0; }

  // Plays one replication. With force_first agent 0 searches whatever its
  // cost. Afterwards searched(i) and rank(i) describe the outcome; rank is -1
  // without a prize-bearing rank. Returns whether the object was found.
  bool play(std::mt19937_64& rng, bool force_first = false) {
    searchers_.clear();
    finders_.clear();
    bool found = false;
    constexpr std::size_t kExpert = static_cast<std::size_t>(-2);
    if (sim_.variant == SimVariant::kExpert && uniform01(rng) < sim_.expert.q_e) {
      found = true;
      finders_.push_back(kExpert);
    }
    auto enlist = [&](std::size_t i) {
      searchers_.push_back(i);
      rank_[i] = -1;
      if (uniform01(rng) < q_[i]) finders_.push_back(i);
    };
    if (symmetric_) {
      // Gaps between searchers are geometric, so only searchers cost draws.
      const double p = search_prob_[0];
      std::size_t i = 0;
      if (force_first) {
        enlist(0);
        i = 1;
      }
      if (p >= 1.0) {
        for (; i < n_; ++i) enlist(i);
      } else if (p > 0.0) {
        const double log_miss = std::log1p(-p);
        while (true) {
          const double gap = std::floor(std::log(1.0 - uniform01(rng)) / log_miss);
          if (!(gap < static_cast<double>(n_ - i))) break;
          i += static_cast<std::size_t>(gap);
          enlist(i);
          ++i;
        }
      }
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        const double u = uniform01(rng);
        if ((force_first && i == 0) || u < search_prob_[i]) enlist(i);
      }
    }
    if (finders_.empty()) return found;
    found = true;
    if (sim_.variant == SimVariant::kMultiprize) {
      // Uniformly random ranking of the finders.
      for (std::size_t k = finders_.size(); k > 1; --k) {
        const std::size_t j = static_cast<std::size_t>(uniform01(rng) * k);
        std::swap(finders_[k - 1], finders_[std::min(j, k - 1)]);
      }
      for (std::size_t r = 0; r < finders_.size(); ++r) rank_[finders_[r]] = static_cast<int>(r);
      return found;
    }
    if (sim_.variant == SimVariant::kExpert && sim_.expert.mode == RewardMode::kExpertKeeps &&
        finders_.front() == kExpert) {
      return found;
    }
    // Reservoir choice of one winner.
    std::size_t winner = finders_.front();
    for (std::size_t k = 1; k < finders_.size(); ++k) {
      if (uniform01(rng) * static_cast<double>(k + 1) < 1.0) winner = finders_[k];
    }
    if (winner != kExpert) rank_[winner] = 0;
    return found;
  }

  const std::vector<std::size_t>& searchers() const { return searchers_; }
  int rank(std::size_t i) const { return rank_[i]; }
  double threshold(std::size_t i) const { return thresholds_[i]; }

 private:
  static std::vector<double> resolve_thresholds(const CostDistribution& d,
                                                const ContestConfig& cfg, const SimConfig& sim) {
    const std::size_t n = static_cast<std::size_t>(cfg.n);
    if (sim.thresholds.size() == 1) return std::vector<double>(n, sim.thresholds[0]);
    if (sim.thresholds.size() == n) return sim.thresholds;
    switch (sim.variant) {
      case SimVariant::kBaseline:
        return std::vector<double>(n, solve_threshold(d, cfg).threshold);
      case SimVariant::kExpert:
        return std::vector<double>(n, solve_threshold_expert(d, cfg, sim.expert).threshold);
      case SimVariant::kMultiprize:
        return std::vector<double>(
            n, solve_threshold_multi(d, cfg.q, PrizeStructure(sim.prizes, cfg.V)).threshold);
      case SimVariant::kHetero: {
        const HeteroContest h(d, sim.q_vec, cfg.V);
        return h.to_input_order(solve_thresholds(h).c);
      }
    }
    return {};
  }

  std::size_t n_;
  const SimConfig& sim_;
  std::vector<double> q_;
  std::vector<double> prizes_;
  std::vector<double> thresholds_;
  std::vector<double> search_prob_;
  std::vector<std::size_t> searchers_;
  std::vector<std::size_t> finders_;
  std::vector<int> rank_;
  bool symmetric_ = true;
};

inline void require_integer_n(const ContestConfig& cfg) {
  cfg.validate();
  require(cfg.n == std::floor(cfg.n) && cfg.n <= 1e7, "simulate: n must be an integer");
}

}  // namespace detail

inline SimEstimate simulate(const CostDistribution& d, const ContestConfig& cfg,
                            const SimConfig& sim) {
  detail::require_integer_n(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  sim.validate(n);
  const detail::Game prototype(d, cfg, sim);
  const bool ranks = sim.variant == SimVariant::kMultiprize;

  struct Acc {
    double successes = 0.0;
    detail::MeanSums searchers;
    detail::RatioSums win, payoff;
    std::vector<double> agent_searches, agent_wins;
    std::vector<detail::RatioSums> rank;
    std::vector<double> rank_matrix;
  };

  auto body = [&](std::size_t, std::size_t, std::size_t reps, std::mt19937_64& rng) {
    detail::Game game = prototype;
    Acc acc;
    acc.agent_searches.assign(n, 0.0);
    acc.agent_wins.assign(n, 0.0);
    if (ranks) {
      acc.rank.assign(n, {});
      acc.rank_matrix.assign(n * n, 0.0);
    }
    std::vector<double> rank_hits(ranks ? n : 0, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      if (game.play(rng)) acc.successes += 1.0;
      const auto& s = game.searchers();
      const double y = static_cast<double>(s.size());
      double wins = 0.0, pay = 0.0;
      std::fill(rank_hits.begin(), rank_hits.end(), 0.0);
      for (std::size_t i : s) {
        const int rk = game.rank(i);
        acc.agent_searches[i] += 1.0;
        if (rk == 0) {
          wins += 1.0;
          acc.agent_wins[i] += 1.0;
        }
        pay += game.prize_for_rank(rk) - game.threshold(i);
        if (ranks && rk >= 0) {
          rank_hits[rk] += 1.0;
          acc.rank_matrix[i * n + rk] += 1.0;
        }
      }
      acc.searchers.add(y);
      acc.win.add(wins, y);
      acc.payoff.add(pay, y);
      for (std::size_t m = 0; m < rank_hits.size(); ++m) acc.rank[m].add(rank_hits[m], y);
    }
    return acc;
  };

  const std::vector<Acc> parts = detail::run_chunks<Acc>(sim.replications, sim.seed, sim.threads, body);
  Acc total;
  total.agent_searches.assign(n, 0.0);
  total.agent_wins.assign(n, 0.0);
  if (ranks) {
    total.rank.assign(n, {});
    total.rank_matrix.assign(n * n, 0.0);
  }
  for (const Acc& a : parts) {
    total.successes += a.successes;
    total.searchers.merge(a.searchers);
    total.win.merge(a.win);
    total.payoff.merge(a.payoff);
    for (std::size_t i = 0; i < n; ++i) {
      total.agent_searches[i] += a.agent_searches[i];
      total.agent_wins[i] += a.agent_wins[i];
    }
    for (std::size_t m = 0; m < total.rank.size(); ++m) total.rank[m].merge(a.rank[m]);
    for (std::size_t k = 0; k < total.rank_matrix.size(); ++k) total.rank_matrix[k] += a.rank_matrix[k];
  }

  const double N = static_cast<double>(sim.replications);
  SimEstimate out;
  out.replications = sim.replications;
  out.thresholds = prototype.thresholds();
  const double p = total.successes / N;
  out.success_rate = {p, N > 1.0 ? std::sqrt(p * (1.0 - p) / (N - 1.0)) : 0.0};
  out.searcher_win_rate = total.win.estimate(N);
  out.mean_payoff_at_threshold = total.payoff.estimate(N);
  out.expected_searchers = total.searchers.estimate(N);
  for (std::size_t i = 0; i < n; ++i) {
    // Per agent X and Y are 0/1 with X <= Y, so the cross sums equal X.
    detail::RatioSums rs{total.agent_wins[i], total.agent_searches[i], total.agent_wins[i],
                         total.agent_wins[i], total.agent_searches[i]};
    out.win_rate_per_agent.push_back(rs.estimate(N));
  }
  for (const auto& rs : total.rank) out.rank_win_rates.push_back(rs.estimate(N));
  if (ranks) {
    out.rank_matrix.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        const double searches = total.agent_searches[i];
        out.rank_matrix[i][m] = searches > 0.0 ? total.rank_matrix[i * n + m] / searches : 0.0;
      }
    }
  }
  return out;
}

// Payoff from searching minus payoff from staying out (zero) for agent 0
// when its cost is `at_cost` and everyone else plays the thresholds.
inline Estimate deviation_gain(const CostDistribution& d, const ContestConfig& cfg,
                               const SimConfig& sim, double at_cost) {
  detail::require_integer_n(cfg);
  sim.validate(static_cast<std::size_t>(cfg.n));
  detail::require_threshold(d, at_cost);
  const detail::Game prototype(d, cfg, sim);

  auto body = [&](std::size_t, std::size_t, std::size_t reps, std::mt19937_64& rng) {
    detail::Game game = prototype;
    detail::MeanSums acc;
    for (std::size_t r = 0; r < reps; ++r) {
      game.play(rng, true);
      acc.add(game.prize_for_rank(game.rank(0)) - at_cost);
    }
    return acc;
  };
  const auto parts =
      detail::run_chunks<detail::MeanSums>(sim.replications, sim.seed, sim.threads, body);
  detail::MeanSums total;
  for (const auto& a : parts) total.merge(a);
  return total.estimate(static_cast<double>(sim.replications));
}

}  // namespace crowdsearch

#endif  // CROWDSEARCH_MONTECARLO_HPP_
