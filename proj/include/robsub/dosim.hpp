// Copyright 2026 The Authors.
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

#pragma once

#include <map>
#include <memory>

#include "robsub/domains.hpp"
#include "robsub/double_oracle.hpp"

namespace robsub {

// Per-edge interval [lo_e, hi_e] of propagation probabilities.
struct IntervalUncertainty {
  VectorXd lo;
  VectorXd hi;

  static IntervalUncertainty global(const Graph& g, double lo, double hi);
  void validate(const Graph& g) const;
};

// Nature's pure strategies.
struct ParamGrid {
  std::vector<EdgeParams> points;
  double spacing = 0.0;
};

inline constexpr std::size_t kParamGridCap = 4096;

// Coupled: one shared interpolation level lambda, p_e = lo_e + lambda (hi_e -
// lo_e), with lambda stepping by delta over the widest interval and both ends
// included. Uncoupled: Cartesian product of the per-edge grids, capped.
ParamGrid discretize_params(const IntervalUncertainty& intervals, double delta, bool coupled,
                            std::size_t cap = kParamGridCap);

enum class PayoffMode { ratio, raw };
enum class OptMode { exact, greedy };

struct InfluenceGame {
  std::shared_ptr<const Graph> graph;
  IntervalUncertainty intervals;
  int budget = 1;  // K
  int horizon = 1;
  PayoffMode payoff = PayoffMode::ratio;
  OptMode opt = OptMode::exact;
  std::size_t samples = 2000;  // Monte Carlo replicates per spread estimate

  void validate() const;
};

// Spread of every seed set under a fixed grid of parameter points, with
// OPT(theta) cached. In exact mode spreads are exact and OPT is exhaustive;
// in greedy mode spreads share common random numbers per theta and OPT is
// the greedy value (so ratios are approximate).
class GamePayoffs {
 public:
  GamePayoffs(const InfluenceGame& game, ParamGrid grid, std::uint64_t seed);

  std::size_t grid_size() const { return grid_.points.size(); }
  const ParamGrid& grid() const { return grid_; }
  const SetObjective& spread(std::size_t g) const { return *objectives_[g]; }
  SampleSpec spec(std::size_t g) const;
  double opt(std::size_t g) const { return opt_[g]; }
  double payoff(const ItemSet& seeds, std::size_t g) const;
  VectorXd payoff_row(const ItemSet& seeds) const;
  // Greedy maximization of the grid-mixture payoff.
  ItemSet best_response(const VectorXd& grid_weights) const;

 private:
  const InfluenceGame& game_;
  ParamGrid grid_;
  std::uint64_t seed_;
  std::vector<std::shared_ptr<const InfluenceObjective>> objectives_;
  std::vector<double> opt_;
};

// spread(seeds; theta) / OPT(theta) for a standalone theta.
double payoff_ratio(const ItemSet& seeds, const EdgeParams& theta, const InfluenceGame& game,
                    std::uint64_t seed);

struct DosimConfig {
  double delta_grid = 0.1;
  bool coupled = true;
  std::size_t grid_cap = kParamGridCap;
  DoubleOracleConfig oracle;
};

struct DosimResult {
  ParamGrid grid;
  DoubleOracleResult equilibrium;
  // Ratio of the security strategy at its worst grid point.
  double worst_grid_ratio = 0.0;
  bool warning = false;  // max_iters or time limit reached before convergence
};

DosimResult dosim_solve(const InfluenceGame& game, const DosimConfig& cfg, std::uint64_t seed);

// min over grid points of the expected payoff of a mixed strategy.
double worst_grid_payoff(const MixedStrategy& strategy, const GamePayoffs& payoffs);

}  // namespace robsub
