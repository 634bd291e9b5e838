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

#include <memory>

#include "robsub/domains.hpp"

namespace robsub {

// Query access to a hidden graph. Querying a node reveals its incident edges.
// A node may be queried when it is an endpoint of a revealed edge, or when the
// ledger itself draws it uniformly at random.
class QueryLedger {
 public:
  QueryLedger(const Graph& hidden, long long budget, std::uint64_t seed);

  int num_nodes() const { return hidden_->num_nodes(); }
  long long budget_remaining() const { return budget_; }
  long long queries_used() const { return used_; }
  long long random_draws_used() const { return draws_; }
  bool queried(int v) const;
  ItemSet queried_nodes() const;
  std::vector<int> revealed_edges() const;  // hidden edge ids, ascending
  std::size_t num_revealed_edges() const { return revealed_count_; }

  // Throws ProtocolError when v is already queried or not adjacent to a
  // queried node, BudgetError when the budget is spent.
  std::span<const Neighbor> query_node(int v);
  // Adjacency of a queried node (ProtocolError otherwise).
  std::span<const Neighbor> neighbors(int v) const;
  // Queries v unless it already is; a repeat visit costs nothing.
  std::span<const Neighbor> visit(int v);

  // Uniform node over all n; queried (and charged) only when new.
  int query_random();
  // Uniform node among the ones not yet queried; always charged.
  int query_random_unqueried();

  Rng& rng() { return rng_; }

 private:
  void reveal(int v);

  const Graph* hidden_;
  long long budget_;
  long long used_ = 0;
  long long draws_ = 0;
  std::vector<char> queried_;
  std::vector<char> adjacent_;  // endpoint of a revealed edge
  std::vector<char> edge_revealed_;
  std::size_t revealed_count_ = 0;
  std::vector<int> unqueried_;  // swap-remove pool
  std::vector<std::size_t> pool_index_;
  Rng rng_;
};

struct WalkEstimate {
  int start = 0;
  std::vector<int> visited;  // walk positions after each step, start excluded
  double degree_estimate = 0.0;
  double size_estimate = 1.0;
  bool truncated = false;
};

// s = clamp(1 + (d - n p_b) / (p_w - p_b), 1, n): the community size whose
// expected degree in the block model is d.
double community_size_estimate(double degree, int n, const SbmParams& params);

// Simple random walk of walk_len steps from start (queried first if needed),
// moving to a uniform neighbor each step. Stops early when the budget runs out
// (truncated) or at an isolated node.
WalkEstimate random_walk_estimate(QueryLedger& ledger, int start, int walk_len,
                                  const SbmParams& params);

struct SeedDistribution {
  std::vector<int> prospective;
  std::vector<double> weights;
};

// Weights proportional to 1 / size_estimate.
SeedDistribution build_seed_distribution(const std::vector<WalkEstimate>& estimates);

struct ArisenConfig {
  int prospective = 0;  // R; 0 picks ceil(3 K ln K) + K
  int walk_len = 4;
  long long budget = 0;  // 0 means R * walk_len + R
  // Which node stands in for a drawn prospective: itself, or the highest
  // degree node on its walk.
  enum class SeedChoice { prospective, walk_max_degree };
  SeedChoice seed_choice = SeedChoice::walk_max_degree;

  int prospective_for(int k) const;
  long long budget_for(int k) const;
};

struct ArisenResult {
  ItemSet seeds;
  long long queries_used = 0;
  std::vector<WalkEstimate> estimates;
  SeedDistribution distribution;
  int truncations = 0;
};

// R uniform prospective seeds, one walk each, then K independent draws from
// the size-corrected distribution. A draw that repeats an already chosen node
// takes an unchosen node of that draw's walk instead (same community with high
// probability), so the result has K seeds whenever enough nodes are known.
ArisenResult arisen_select(const Graph& hidden, int k, const SbmParams& params,
                           const ArisenConfig& cfg, std::uint64_t seed);

struct ChangeSample {
  Graph observed;                  // all n nodes, revealed edges only
  std::vector<int> hidden_edge;    // observed edge id -> hidden edge id
  long long queried = 0;
};

// Until ceil(fraction n) nodes are queried: query a uniform unqueried node,
// then one uniform neighbor of it. Isolated nodes get no partner.
ChangeSample change_sample(const Graph& hidden, double fraction, std::uint64_t seed);

struct RobustPResult {
  ItemSet seeds;
  std::vector<double> normalizers;  // greedy spread per p
  std::vector<double> ratios;       // spread(seeds; p) / normalizer
  double min_ratio = 0.0;
};

// Greedy on min over p of spread(S; p) / spread(greedy_p; p). Spread for the
// g-th p uses SampleSpec{samples, derive_seed(seed, g)}.
RobustPResult robust_p_heuristic(std::shared_ptr<const Graph> observed, int k,
                                 const std::vector<double>& p_grid, int horizon,
                                 std::size_t samples, std::uint64_t seed);

struct AttendanceModel {
  VectorXd q;  // attendance probability per node

  static AttendanceModel constant(int n, double q);
  void validate(int n) const;
};

// Expected spread of attended ∪ (invitees that show up). samples == 0 asks for
// the exact value: every attendance outcome weighted, exact spread each.
class AttendanceSpread final : public SetObjective {
 public:
  AttendanceSpread(std::shared_ptr<const Graph> g, EdgeParams p, int horizon,
                   AttendanceModel attendance, ItemSet attended, std::size_t samples);

  int ground_size() const override { return graph_->num_nodes(); }
  // spec.seed picks the cascade and attendance draws.
  double value(ItemSpan invited, SampleSpec spec = {}) const override;
  bool stochastic() const override { return samples_ > 0; }

 private:
  std::shared_ptr<const Graph> graph_;
  EdgeParams params_;
  int horizon_;
  AttendanceModel attendance_;
  ItemSet attended_;
  std::size_t samples_;
};

// Greedy invitee choice for one round. Uses SampleSpec{samples, seed}.
ItemSet plan_round(std::shared_ptr<const Graph> g, const EdgeParams& p, int horizon,
                   const ItemSet& attended, int k, const AttendanceModel& attendance,
                   std::size_t samples, std::uint64_t seed);

struct AdaptiveRound {
  ItemSet invited;
  ItemSet attended;           // this round
  double cumulative_spread;   // expected spread of every attended seed so far
};

// Round t plans with seed derive_seed(seed, 1, t) and realizes attendance
// with derive_seed(seed, 2, t).
std::vector<AdaptiveRound> adaptive_greedy(std::shared_ptr<const Graph> g, const EdgeParams& p,
                                           int horizon, int k_per_round, int rounds,
                                           const AttendanceModel& attendance,
                                           std::size_t samples, std::uint64_t seed);

}  // namespace robsub
