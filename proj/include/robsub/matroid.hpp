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
#include <optional>
#include <variant>

#include "robsub/common.hpp"

namespace robsub {

// Matroid constraint over items 0..n-1: a cardinality bound (uniform matroid),
// a partition matroid, or an arbitrary matroid given by an independence
// oracle. Independent sets are passed as sorted ItemSets.
class Constraint {
 public:
  using IndependenceOracle = std::function<bool(ItemSpan)>;

  static Constraint cardinality(int n, int k);
  // part_of[i] names the part of item i; at most capacity[p] items per part.
  static Constraint partition(std::vector<int> part_of, std::vector<int> capacity);
  // The oracle must be downward closed and satisfy the exchange axiom;
  // check_small_matroid verifies that on small ground sets.
  static Constraint from_oracle(int n, IndependenceOracle independent);

  int ground_size() const { return n_; }
  int rank() const { return rank_; }

  bool is_cardinality() const { return std::holds_alternative<Uniform>(kind_); }
  bool is_partition() const { return std::holds_alternative<Partition>(kind_); }
  bool has_closed_form_polytope() const { return !std::holds_alternative<Oracle>(kind_); }

  bool independent(ItemSpan s) const;
  // s must already be independent.
  bool can_add(ItemSpan s, int item) const;

  // Matroid greedy: maximum-weight independent set over positive weights,
  // ties to the lowest id. This is linear optimization over the matroid
  // polytope.
  ItemSet max_weight_independent(const VectorXd& weights) const;

  // Membership in the matroid polytope. Exact for cardinality and partition
  // constraints, by rank inequalities for oracle matroids with n <= 16,
  // nullopt otherwise.
  std::optional<bool> in_polytope(const VectorXd& x, double tol = 1e-9) const;

  // Partition view (cardinality is a single part); throws for oracle kinds.
  const std::vector<int>& parts() const;
  const std::vector<int>& capacities() const;

 private:
  struct Uniform {
    int k;
  };
  struct Partition {
    std::vector<int> part_of;
    std::vector<int> capacity;
  };
  struct Oracle {
    IndependenceOracle independent;
  };

  int rank_of(ItemSpan s) const;

  int n_ = 0;
  int rank_ = 0;
  std::variant<Uniform, Partition, Oracle> kind_;
  std::vector<int> part_view_;
  std::vector<int> capacity_view_;
};

// Exhaustive check of downward closure and the augmentation property; n <= 12.
bool check_small_matroid(const Constraint& c);

}  // namespace robsub
