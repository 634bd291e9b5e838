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

#include <functional>

#include "robsub/set_objective.hpp"
#include "robsub/swap_rounding.hpp"

namespace robsub {

struct DoubleOracleConfig {
  double tol = 1e-3;
  int max_iters = 200;
  double time_limit_seconds = 600.0;
  SampleSpec eval;
};

// Zero-sum game between a set-choosing maximizer and an adversary with a
// finite pool of pure strategies 0..pool_size-1.
struct DoubleOracleProblem {
  int pool_size = 0;
  // Payoff of a set against every pool strategy.
  std::function<VectorXd(const ItemSet&)> payoff_row;
  // Maximizer best response to a mixture over the pool (weights sum to 1).
  std::function<ItemSet(const VectorXd&)> best_response;
  ItemSet initial;
};

struct DoubleOracleResult {
  // Restricted-game equilibrium strategy of the maximizer.
  MixedStrategy maximizer;
  // Best mixture of the accumulated sets against the whole pool; its worst
  // case is security_value.
  MixedStrategy security_strategy;
  VectorXd adversary;  // restricted equilibrium mixture, length pool_size
  double game_value = 0.0;
  double security_value = 0.0;
  std::vector<double> game_values;
  std::vector<double> security_values;  // nondecreasing
  std::vector<std::size_t> maximizer_support;
  std::vector<std::size_t> adversary_support;
  std::vector<double> elapsed_ms;  // since the start, at each restricted solve
  // Improvement offered by the final best responses (certificate gaps).
  double maximizer_gap = 0.0;
  double adversary_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  bool timed_out = false;
};

// Alternates restricted LP solves with best responses from both sides until
// neither improves on the restricted value by more than tol, max_iters is
// reached, or the time limit passes. The adversary best response is exact
// (argmin over the whole pool).
DoubleOracleResult run_double_oracle(const DoubleOracleProblem& problem,
                                     const DoubleOracleConfig& cfg);

// Mixed strategy over `sets` with LP weights (tiny negative roundoff clipped).
MixedStrategy mixed_strategy_from(const std::vector<ItemSet>& sets, const VectorXd& weights);

}  // namespace robsub
