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

#include "robsub/matroid.hpp"

namespace robsub {

struct WeightedSet {
  ItemSet set;
  double weight = 0.0;
};

// Distribution over feasible sets with an explicit support.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  // Merges duplicate sets, drops zero weights, renormalizes. Throws
  // InputError on negative weights or an empty/zero-mass support.
  explicit MixedStrategy(std::vector<WeightedSet> support);
  static MixedStrategy pure(ItemSet s) { return MixedStrategy({{std::move(s), 1.0}}); }
  static MixedStrategy uniform(const std::vector<ItemSet>& draws);

  const std::vector<WeightedSet>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  VectorXd marginals(int n) const;
  // Every support set independent and weights summing to 1 within 1e-9.
  bool valid_for(const Constraint& c) const;
  ItemSet sample(Rng& rng) const;

 private:
  std::vector<WeightedSet> support_;  // sorted by set
};

// Convex combination of independent sets whose weighted indicator sum is x.
// Closed form for cardinality and partition constraints: items of a part are
// laid end to end on a line and a set is read off at every point t + j; all
// parts share t, so the pieces are the intervals between breakpoints of t.
// Throws InputError when x is outside the polytope and UnsupportedError for
// oracle matroids.
std::vector<WeightedSet> decompose(const VectorXd& x, const Constraint& c);

// Randomized merge of a convex combination into one independent set whose
// indicator has expectation equal to the weighted mean of the inputs.
// Independent sets are padded with dummy free elements to bases of the rank-r
// truncation of M plus r free elements, merged by exchanges, then stripped.
ItemSet swap_round(const std::vector<WeightedSet>& combination, const Constraint& c,
                   std::uint64_t seed);

// decompose + swap_round.
ItemSet swap_round(const VectorXd& x, const Constraint& c, std::uint64_t seed);

}  // namespace robsub
