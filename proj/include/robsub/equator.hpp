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

#include "robsub/double_oracle.hpp"
#include "robsub/greedy.hpp"
#include "robsub/swap_rounding.hpp"

namespace robsub {

// Explicit finite family of monotone normalized objectives on one ground set.
class ObjectiveFamily {
 public:
  explicit ObjectiveFamily(std::vector<ObjectivePtr> members);

  int size() const { return static_cast<int>(members_.size()); }
  int ground_size() const { return members_.front()->ground_size(); }
  const ObjectivePtr& member(int j) const { return members_.at(static_cast<std::size_t>(j)); }
  const std::vector<ObjectivePtr>& members() const { return members_; }
  // M = max over members and items of f_j({i}).
  double bound() const { return bound_; }

 private:
  std::vector<ObjectivePtr> members_;
  double bound_ = 0.0;
};

// Argmin over members of the estimated E_{S~x}[f_j(S)], every member scored on
// the same draws. Ties go to the lowest index.
int bri_enumerative(const ObjectiveFamily& family, const VectorXd& x, std::size_t samples,
                    std::uint64_t seed);

struct BriResponse {
  ObjectivePtr member;
  int index = -1;  // -1 when the family is implicit
};

// Best response to independent distributions: the adversary's minimizing
// objective against the product distribution with marginals x.
class BestResponseOracle {
 public:
  virtual ~BestResponseOracle() = default;
  virtual int ground_size() const = 0;
  virtual double bound() const = 0;
  virtual BriResponse respond(const VectorXd& x, std::uint64_t seed) const = 0;
};

// BRI over an explicit family. With closed_form set, members that expose a
// closed-form multilinear extension are scored exactly; otherwise all members
// share `samples` Monte Carlo draws.
class EnumerativeBri final : public BestResponseOracle {
 public:
  EnumerativeBri(const ObjectiveFamily& family, std::size_t samples, bool closed_form = true)
      : family_(family), samples_(samples), closed_form_(closed_form) {}
  int ground_size() const override { return family_.ground_size(); }
  double bound() const override { return family_.bound(); }
  BriResponse respond(const VectorXd& x, std::uint64_t seed) const override;

 private:
  const ObjectiveFamily& family_;
  std::size_t samples_;
  bool closed_form_;
};

struct EquatorConfig {
  double epsilon = 0.05;
  double delta = 0.05;
  int iterations = 50;
  std::size_t grad_samples = 200;
  std::size_t eval_samples = 200;
  std::size_t strategy_samples = 50;
  // Use closed-form multilinear gradients when the BRI member has them.
  bool closed_form = true;

  void validate() const;
};

struct EquatorResult {
  VectorXd x;
  // Frank-Wolfe vertices, each with weight 1/iterations; their weighted sum is x.
  std::vector<WeightedSet> vertices;
  // Uniform over strategy_samples independent roundings of x.
  MixedStrategy strategy;
  std::vector<int> bri_trace;
};

// Frank-Wolfe on min_j F_j(x) with step 1/iterations: at each step the BRI
// member's multilinear gradient is linearly optimized over the matroid polytope.
EquatorResult equator_solve(const BestResponseOracle& bri, const Constraint& c,
                            const EquatorConfig& cfg, std::uint64_t seed);
EquatorResult equator_solve(const ObjectiveFamily& family, const Constraint& c,
                            const EquatorConfig& cfg, std::uint64_t seed);

// One rounding of x. This is how exponential-support equilibria are deployed:
// sample rather than enumerate.
ItemSet sample_pure_strategy(const VectorXd& x, const Constraint& c, std::uint64_t seed);

// Uniform distribution over `count` independent roundings of a combination.
MixedStrategy sparse_strategy(const std::vector<WeightedSet>& combination, const Constraint& c,
                              std::size_t count, std::uint64_t seed);

// Expected value of each member under a mixed strategy (exact evaluators when
// available).
VectorXd member_values(const MixedStrategy& strategy, const ObjectiveFamily& family,
                       SampleSpec spec = {});
double worst_case_value(const MixedStrategy& strategy, const ObjectiveFamily& family,
                        SampleSpec spec = {});

// Restricted-game LP, greedy maximizer best response, exact adversary best
// response by enumeration over members.
DoubleOracleResult double_oracle_solve(const ObjectiveFamily& family, const Constraint& c,
                                       const DoubleOracleConfig& cfg = {});

struct MinimaxSolution {
  double value = 0.0;
  MixedStrategy maximizer;
  VectorXd adversary;
  std::size_t feasible_sets = 0;
};

inline constexpr std::size_t kMinimaxSetCap = 5000;
inline constexpr int kMinimaxMemberCap = 100;

// Exact game value by LP over every base of the constraint (monotone members
// make non-maximal sets dominated).
MinimaxSolution exact_minimax_lp(const ObjectiveFamily& family, const Constraint& c,
                                 std::size_t set_cap = kMinimaxSetCap,
                                 int member_cap = kMinimaxMemberCap);

// Non-robust baseline: greedy on the uniform average of the members.
ItemSet nominal_greedy(const ObjectiveFamily& family, const Constraint& c, SampleSpec spec = {});

}  // namespace robsub
