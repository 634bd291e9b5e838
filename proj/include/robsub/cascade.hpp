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

#include <cstdint>
#include <vector>

#include "robsub/graph.hpp"

namespace robsub {

// Time-horizon independent cascade.
//
// Steps run t = 1..horizon. Seeds listed in schedule[t-1] become active at the
// start of step t. During step t every active node makes one attempt on each
// inactive neighbor; successes become active at the end of the step and start
// attempting at t+1. Attempts repeat every step until the neighbor is active
// or the horizon ends.
struct CascadeConfig {
  int horizon = 1;
  std::vector<ItemSet> schedule;

  static CascadeConfig single(ItemSet seeds, int horizon);
  void validate(const Graph& g) const;
  ItemSet all_seeds() const;
};

// Coin for the attempt across `edge` during `step` (1-based) of the
// realization identified by `seed`. At most one attempt per (edge, step) can
// happen, so a single coin per pair fully determines a realization; sharing
// coins across seed sets gives common random numbers.
inline double cascade_coin(std::uint64_t seed, int edge, int step) {
  return unit_from_bits(splitmix64(derive_seed(seed, static_cast<std::uint64_t>(edge)) ^
                                   (static_cast<std::uint64_t>(step) * 0xD1B54A32D192ED03ULL)));
}

ItemSet simulate_icm(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                     std::uint64_t seed);

struct SpreadEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Replicate r uses derive_seed(seed, r).
SpreadEstimate expected_spread(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                               std::size_t samples, std::uint64_t seed);

inline constexpr int kExactSpreadCap = 24;

// Exact expectation by enumerating every attempt outcome of the step-by-step
// process. Throws SizeError when |E| * horizon exceeds `max_edge_steps`.
double exact_spread(const Graph& g, const EdgeParams& p, const CascadeConfig& cfg,
                    int max_edge_steps = kExactSpreadCap);

// Fixed batch of cascade realizations (common random numbers) with all seeds
// placed at step 1. Realization r is identical to simulate_icm with seed
// derive_seed(seed, r), so totals agree exactly with expected_spread.
//
// Holds references: the graph and params must outlive the sampler.
class SpreadSampler {
 public:
  SpreadSampler(const Graph& g, const EdgeParams& p, int horizon, std::size_t samples,
                std::uint64_t seed);

  std::size_t samples() const { return samples_; }
  int horizon() const { return horizon_; }
  const Graph& graph() const { return *graph_; }

  // Sum over realizations of the activated-node count.
  std::int64_t total_activated(ItemSpan seeds) const;
  double mean(ItemSpan seeds) const {
    return static_cast<double>(total_activated(seeds)) / static_cast<double>(samples_);
  }

  // Incremental evaluation for greedy: per-realization activation times of the
  // current seed set.
  class State {
   public:
    std::int64_t total() const { return total_; }
    const ItemSet& seeds() const { return seeds_; }

   private:
    friend class SpreadSampler;
    std::vector<std::vector<std::uint8_t>> times_;
    std::int64_t total_ = 0;
    ItemSet seeds_;
  };

  State empty_state() const;
  State state_for(ItemSpan seeds) const;
  // Newly activated nodes, summed over realizations, if `node` were added.
  std::int64_t gain(const State& state, int node) const;
  void add(State& state, int node) const;

 private:
  std::uint64_t realization_seed(std::size_t r) const { return derive_seed(seed_, r); }
  // Seeds `node` at time 0 into `times`; returns the nodes newly reached.
  std::int64_t propagate(std::vector<std::uint8_t>& times, std::size_t r, int node) const;

  const Graph* graph_;
  const EdgeParams* params_;
  int horizon_;
  std::size_t samples_;
  std::uint64_t seed_;
};

}  // namespace robsub
